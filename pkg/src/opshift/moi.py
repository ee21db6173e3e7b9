"""Multiple operator integrals with divided-difference symbols.

Finite dimensions reduce every such integral to a sum over eigenprojection
multi-indices; the summation is a plain lexicographic loop with complex
double accumulation and no reordering, so outputs are bit-reproducible.
Operations that the theory equates along two routes (difference vs
integral, remainder vs integral) compute both and refuse to return when
they disagree.
"""

from __future__ import annotations

import itertools
import math
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .besov import SmoothFunction
from .errors import BudgetError, DimensionError, VerificationError
from .matcore import HermitianOperator, SpectralDecomposition, a_t, eigh, matfun

BUDGET_CAP = 10**8
ROUTE_RTOL = 1e-9

_FAULT_OFFSET = 0.0


@contextmanager
def fault_injection(offset: float):
    """Test hook: add ``offset`` to one entry of every MOI result."""
    global _FAULT_OFFSET
    prev = _FAULT_OFFSET
    _FAULT_OFFSET = float(offset)
    try:
        yield
    finally:
        _FAULT_OFFSET = prev


@dataclass(frozen=True)
class MoiProblem:
    """Order-m integral data: m+1 spectral measures with m middles between."""

    order: int
    f: SmoothFunction
    measures: tuple[SpectralDecomposition, ...]
    middles: tuple[HermitianOperator, ...]

    def __post_init__(self):
        m = self.order
        if not 1 <= m <= 4:
            raise ValueError(f"order must lie in [1, 4], got {m}")
        if len(self.measures) != m + 1:
            raise DimensionError(f"need {m + 1} spectral measures, got {len(self.measures)}")
        if len(self.middles) != m:
            raise DimensionError(f"need {m} middle operators, got {len(self.middles)}")
        dims = {d.dim for d in self.measures} | {k.dim for k in self.middles}
        if len(dims) != 1:
            raise DimensionError(f"mixed dimensions {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.measures[0].dim


def _check_budget(n: int, m: int) -> None:
    terms = n ** (m + 1)
    if terms > BUDGET_CAP:
        raise BudgetError(terms, BUDGET_CAP)


def moi_eval(problem: MoiProblem) -> np.ndarray:
    """Sum the divided-difference symbol against eigenprojection chains.

    Divided differences are memoized per sorted node tuple; eigenvalue
    clusters that are numerically coincident take the confluent path
    inside :func:`opshift.divdiff.divided_difference` automatically.
    """
    from .divdiff import divided_difference

    m = problem.order
    n = problem.dim
    _check_budget(n, m)
    evals = [dec.eigenvalues for dec in problem.measures]
    us = [dec.vectors for dec in problem.measures]
    ktil = [
        us[r].conj().T @ problem.middles[r].mat @ us[r + 1] for r in range(m)
    ]
    memo: dict[tuple[float, ...], float] = {}
    acc = np.zeros((n, n), dtype=np.complex128)
    for idx in itertools.product(range(n), repeat=m + 1):
        w = complex(1.0)
        for r in range(m):
            w *= ktil[r][idx[r], idx[r + 1]]
            if w == 0.0:
                break
        if w == 0.0:
            continue
        key = tuple(sorted(evals[r][idx[r]] for r in range(m + 1)))
        val = memo.get(key)
        if val is None:
            val = divided_difference(problem.f, key)
            memo[key] = val
        acc[idx[0], idx[-1]] += val * w
    out = us[0] @ acc @ us[-1].conj().T
    if _FAULT_OFFSET:
        out[0, 0] += _FAULT_OFFSET
    return out


def _route_check(what: str, direct: np.ndarray, integral: np.ndarray, frobenius: bool = False) -> None:
    if frobenius:
        resid = float(np.linalg.norm(direct - integral))
        scale = 1.0 + float(np.linalg.norm(direct))
    else:
        resid = float(np.max(np.abs(direct - integral)))
        scale = 1.0 + float(np.max(np.abs(direct)))
    if resid > ROUTE_RTOL * scale:
        raise VerificationError(what, resid, ROUTE_RTOL * scale)


def perturbation_difference(f: SmoothFunction, a: HermitianOperator, k: HermitianOperator) -> np.ndarray:
    """f(A+K) - f(A), returned in its double-integral form.

    The direct functional-calculus difference is computed alongside and
    must agree to ``ROUTE_RTOL`` times scale.
    """
    apk = a_t(a, k, 1.0)
    integral = moi_eval(MoiProblem(1, f, (eigh(apk), eigh(a)), (k,)))
    direct = matfun(f, apk).mat - matfun(f, a).mat
    _route_check("perturbation difference", direct, integral)
    return integral


def derivative(
    f: SmoothFunction, a: HermitianOperator, k: HermitianOperator, m: int, s: float = 0.0
) -> np.ndarray:
    """(d^m/dt^m) f(A + tK) at t = s: m! times the order-m integral at A_s."""
    dec = eigh(a_t(a, k, s))
    problem = MoiProblem(m, f, (dec,) * (m + 1), (k,) * m)
    return math.factorial(m) * moi_eval(problem)


def finite_difference(f: SmoothFunction, a: HermitianOperator, k: HermitianOperator, m: int) -> np.ndarray:
    """The alternating-binomial difference of f along j -> A + jK.

    Also evaluates the staggered-measure integral (measures at A, A+K,
    ..., A+mK) times m! and requires the two routes to agree.
    """
    if not 1 <= m <= 4:
        raise ValueError(f"order must lie in [1, 4], got {m}")
    direct = np.zeros((a.dim, a.dim), dtype=np.complex128)
    decs = []
    for j in range(m + 1):
        aj = a_t(a, k, float(j))
        decs.append(eigh(aj))
        direct += (-1.0) ** (m - j) * math.comb(m, j) * matfun(f, aj).mat
    staggered = math.factorial(m) * moi_eval(MoiProblem(m, f, tuple(decs), (k,) * m))
    _route_check("finite difference identity", direct, staggered)
    return direct


def taylor_remainder(f: SmoothFunction, a: HermitianOperator, k: HermitianOperator, m: int) -> np.ndarray:
    """f(A+K) minus its order-(m-1) expansion in the perturbation direction.

    Returned in the integral form (first measure at A+K, the rest at A);
    the direct form is computed alongside and must agree in Frobenius
    norm to ``ROUTE_RTOL`` times scale.
    """
    if not 1 <= m <= 4:
        raise ValueError(f"order must lie in [1, 4], got {m}")
    apk = a_t(a, k, 1.0)
    dec_a = eigh(a)
    integral = moi_eval(MoiProblem(m, f, (eigh(apk),) + (dec_a,) * m, (k,) * m))
    direct = matfun(f, apk).mat - matfun(f, a).mat
    for order in range(1, m):
        direct -= derivative(f, a, k, order, 0.0) / math.factorial(order)
    _route_check("Taylor remainder identity", direct, integral, frobenius=True)
    return integral


def trace_derivative(
    f: SmoothFunction, a: HermitianOperator, k: HermitianOperator, m: int, s: float = 0.0
) -> float:
    """trace of the m-th derivative of t -> f(A + tK) at t = s.

    Contracts the cyclic multi-index sum directly in the eigenbasis of
    A_s instead of forming the matrix; agrees with the trace of
    :func:`derivative` to 1e-10 relative on suite instances.
    """
    from .divdiff import divided_difference

    if not 1 <= m <= 4:
        raise ValueError(f"order must lie in [1, 4], got {m}")
    n = a.dim
    _check_budget(n, m)
    dec = eigh(a_t(a, k, s))
    lam = dec.eigenvalues
    ktil = dec.vectors.conj().T @ k.mat @ dec.vectors
    memo: dict[tuple[float, ...], float] = {}
    total = complex(0.0)
    for idx in itertools.product(range(n), repeat=m):
        w = complex(1.0)
        for r in range(m):
            w *= ktil[idx[r], idx[(r + 1) % m]]
            if w == 0.0:
                break
        if w == 0.0:
            continue
        key = tuple(sorted((*(lam[i] for i in idx), lam[idx[0]])))
        val = memo.get(key)
        if val is None:
            val = divided_difference(f, key)
            memo[key] = val
        total += val * w
    return math.factorial(m) * float(total.real)
