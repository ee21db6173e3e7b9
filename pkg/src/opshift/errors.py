"""Exception types shared across the package."""

from __future__ import annotations


class OpshiftError(Exception):
    """Base class for all package-specific errors."""


class HermiticityError(OpshiftError, ValueError):
    """Input matrix is not self-adjoint within tolerance."""

    def __init__(self, asymmetry: float, tolerance: float):
        self.asymmetry = asymmetry
        self.tolerance = tolerance
        super().__init__(
            f"matrix is not Hermitian: max |A - A*| = {asymmetry:.3e} "
            f"exceeds tolerance {tolerance:.3e}"
        )


class DimensionError(OpshiftError, ValueError):
    """Operands have incompatible dimensions."""


class ConvergenceError(OpshiftError, RuntimeError):
    """An iterative procedure failed to converge; carries diagnostics."""


class FunctionEvalError(OpshiftError, ValueError):
    """A scalar function could not be evaluated at a spectral point."""

    def __init__(self, label: str, point: float, cause: Exception):
        self.point = point
        super().__init__(f"evaluation of {label!r} failed at x = {point!r}: {cause}")


class DerivativeOrderError(OpshiftError, ValueError):
    """A derivative oracle of the required order is not available."""

    def __init__(self, label: str, order: int, available: int):
        self.order = order
        self.available = available
        super().__init__(
            f"{label!r} provides derivatives up to order {available}, "
            f"but order {order} is required"
        )


class BudgetError(OpshiftError, ValueError):
    """A multi-index sum would exceed the hard work cap."""

    def __init__(self, terms: int, cap: int):
        self.terms = terms
        self.cap = cap
        super().__init__(f"multi-index sum has {terms} terms, exceeding cap {cap}")


class VerificationError(OpshiftError, ArithmeticError):
    """Two evaluation routes of one quantity disagree beyond tolerance."""

    def __init__(self, what: str, residual: float, tolerance: float):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(
            f"{what}: routes disagree by {residual:.3e} (tolerance {tolerance:.3e})"
        )


class QuadratureError(OpshiftError, RuntimeError):
    """Panel-doubling convergence test failed; carries the last two estimates."""

    def __init__(self, estimates_coarse, estimates_fine, rel_change: float):
        self.estimates_coarse = estimates_coarse
        self.estimates_fine = estimates_fine
        super().__init__(
            f"time quadrature did not converge: relative change {rel_change:.3e} "
            f"between {list(estimates_coarse)} and {list(estimates_fine)}"
        )


class MomentConditionError(OpshiftError, ValueError):
    """A discrete time measure violates required vanishing moments."""

    def __init__(self, failing: list[tuple[int, float]]):
        self.failing = failing
        detail = ", ".join(f"order {k}: {v:.3e}" for k, v in failing)
        super().__init__(f"moment conditions violated ({detail})")


class UnsupportedFunctionError(OpshiftError, ValueError):
    """The operation needs metadata (e.g. a Fourier transform) the function lacks."""


class GridCoverageError(OpshiftError, ValueError):
    """Output grid does not cover the support of a measure."""

    def __init__(self, lo: float, hi: float, need_lo: float, need_hi: float):
        self.required = (need_lo, need_hi)
        super().__init__(
            f"grid [{lo:g}, {hi:g}] does not cover measure support; "
            f"need at least [{need_lo:g}, {need_hi:g}]"
        )


class DivergenceError(OpshiftError, ArithmeticError):
    """A seminorm integral diverges: the function is outside the target class."""
