"""Dense Hermitian linear algebra at desk scale.

Values are immutable after construction and every operation is a pure
function of its inputs, so everything here is safe to call concurrently.
The eigensolver is a cyclic Jacobi iteration with complex Givens
rotations: for the n <= 64 matrices this package targets it is accurate
to near machine precision and bit-reproducible run to run, which the
golden tests rely on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    FunctionEvalError,
    HermiticityError,
)

HERMITICITY_RTOL = 1e-12      # vs max |entry|
UNITARITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10    # vs 1 + max |entry|
JACOBI_OFF_TOL = 1e-13        # off-diagonal Frobenius vs ||A||_F
JACOBI_MAX_SWEEPS = 64


@dataclass(frozen=True)
class HermitianOperator:
    """A dense complex self-adjoint matrix.

    Construction symmetrizes the input to (A + A*)/2 when the asymmetry
    is within ``HERMITICITY_RTOL * max|entry|`` (file round-trip noise)
    and rejects it otherwise.
    """

    mat: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.mat, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise DimensionError("dimension must be at least 1")
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        asym = float(np.max(np.abs(a - a.conj().T)))
        tol = HERMITICITY_RTOL * scale
        if asym > tol:
            raise HermiticityError(asym, tol)
        sym = (a + a.conj().T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "mat", sym)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.mat)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and a unitary matrix of eigenvector columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=np.float64)
        u = np.asarray(self.vectors, dtype=np.complex128)
        if np.any(np.diff(lam) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        gram = u.conj().T @ u
        err = float(np.max(np.abs(gram - np.eye(u.shape[0]))))
        if err > UNITARITY_TOL:
            raise ValueError(f"eigenvector matrix is not unitary: ||U*U - I||_max = {err:.3e}")
        lam.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "vectors", u)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class SchattenIndex:
    """A summability index p in [1, inf]; inf means the operator norm."""

    p: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError(f"Schatten index must satisfy p >= 1, got {self.p}")


def _jacobi_rotate(a: np.ndarray, u: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] with a complex Givens rotation, updating a and u in place."""
    apq = a[p, q]
    mod = abs(apq)
    if mod == 0.0:
        return
    phase = apq / mod
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * mod)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # J has columns p, q:  [c, s; -s*conj(phase), c*conj(phase)]
    jpp, jpq = c, s
    jqp, jqq = -s * np.conj(phase), c * np.conj(phase)

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = jpp * col_p + jqp * col_q
    a[:, q] = jpq * col_p + jqq * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = np.conj(jpp) * row_p + np.conj(jqp) * row_q
    a[q, :] = np.conj(jpq) * row_p + np.conj(jqq) * row_q
    a[p, p] = app - t * mod
    a[q, q] = aqq + t * mod
    a[p, q] = 0.0
    a[q, p] = 0.0

    col_p = u[:, p].copy()
    col_q = u[:, q].copy()
    u[:, p] = jpp * col_p + jqp * col_q
    u[:, q] = jpq * col_p + jqq * col_q


def _off_frobenius(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _fix_phases(u: np.ndarray) -> None:
    """Rotate each column so its first entry of largest modulus is real positive."""
    n = u.shape[1]
    for k in range(n):
        col = u[:, k]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if abs(pivot) > 0.0:
            u[:, k] = col * (np.conj(pivot) / abs(pivot))


def eigh(operator: HermitianOperator) -> SpectralDecomposition:
    """Full eigendecomposition by cyclic Jacobi sweeps.

    Converges when the off-diagonal Frobenius norm drops below
    ``JACOBI_OFF_TOL * ||A||_F``; raises :class:`ConvergenceError` with the
    final off-diagonal norm after ``JACOBI_MAX_SWEEPS`` sweeps.  Output is
    deterministic for identical input bits: ascending eigenvalues, with
    eigenvector phases fixed so the first component of largest modulus in
    each column is real positive.
    """
    a = np.array(operator.mat, dtype=np.complex128)
    n = a.shape[0]
    u = np.eye(n, dtype=np.complex128)
    norm_f = float(np.linalg.norm(a))
    if n > 1 and norm_f > 0.0:
        threshold = JACOBI_OFF_TOL * norm_f
        converged = False
        for _sweep in range(JACOBI_MAX_SWEEPS):
            if _off_frobenius(a) <= threshold:
                converged = True
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if abs(a[p, q]) > 1e-300:
                        _jacobi_rotate(a, u, p, q)
        if not converged and _off_frobenius(a) > threshold:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps: "
                f"off-diagonal Frobenius norm {_off_frobenius(a):.3e} "
                f"(threshold {threshold:.3e})"
            )
    lam = np.real(np.diag(a)).copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    u = u[:, order]
    _fix_phases(u)
    dec = SpectralDecomposition(eigenvalues=lam, vectors=u)
    recon = float(np.max(np.abs(operator.mat @ u - u * lam[np.newaxis, :])))
    if recon > RECONSTRUCTION_TOL * (1.0 + operator.max_abs()):
        raise ConvergenceError(
            f"eigendecomposition residual ||AU - U Lambda||_max = {recon:.3e} "
            f"exceeds tolerance"
        )
    return dec


def matfun(f, operator: HermitianOperator) -> HermitianOperator:
    """Apply a scalar function to a Hermitian matrix: U f(Lambda) U*."""
    dec = eigh(operator)
    lam = dec.eigenvalues
    try:
        values = np.asarray(f(lam), dtype=np.complex128)
    except Exception as exc:
        label = getattr(f, "label", repr(f))
        for x in lam:
            try:
                f(np.asarray([x]))
            except Exception as inner:
                raise FunctionEvalError(label, float(x), inner) from inner
        raise FunctionEvalError(label, float(lam[0]), exc) from exc
    u = dec.vectors
    out = (u * values[np.newaxis, :]) @ u.conj().T
    return HermitianOperator(out)


def schatten(operator: HermitianOperator, index: SchattenIndex | float) -> float:
    """Schatten p-norm; for Hermitian input the singular values are |eigenvalues|."""
    p = index.p if isinstance(index, SchattenIndex) else SchattenIndex(float(index)).p
    sv = np.abs(eigh(operator).eigenvalues)
    if np.isinf(p):
        return float(np.max(sv))
    return float(np.sum(sv**p) ** (1.0 / p))


def a_t(a: HermitianOperator, k: HermitianOperator, t: float) -> HermitianOperator:
    """The perturbation path A + tK."""
    if a.dim != k.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {k.dim}")
    return HermitianOperator(a.mat + t * k.mat)


def truncate_spectrum(operator: HermitianOperator, j: float) -> HermitianOperator:
    """Zero all eigenvalues with |lambda| > j, keeping the eigenvectors."""
    dec = eigh(operator)
    lam = np.where(np.abs(dec.eigenvalues) > j, 0.0, dec.eigenvalues)
    u = dec.vectors
    return HermitianOperator((u * lam[np.newaxis, :]) @ u.conj().T)


def trace(operator: HermitianOperator) -> float:
    return float(np.real(np.trace(operator.mat)))


# -- matrix file format (consumed by the cli) --------------------------------
#
# A single JSON object: {"n": int, "re": n x n rows, "im": n x n rows (optional)}.
# Values are parsed as 64-bit floats; bit-exact decimal round-trip is not
# required by the format, but the writer emits repr() floats which do round-trip.


def load_operator(path: str | Path) -> HermitianOperator:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        n = int(data["n"])
        re = np.asarray(data["re"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed matrix file: {exc}") from exc
    im = np.asarray(data.get("im", np.zeros((n, n))), dtype=np.float64)
    if re.shape != (n, n) or im.shape != (n, n):
        raise DimensionError(
            f"{path}: expected {n}x{n} entries, got re {re.shape}, im {im.shape}"
        )
    return HermitianOperator(re + 1j * im)


def save_operator(path: str | Path, operator: HermitianOperator) -> None:
    a = operator.mat
    payload = {
        "n": operator.dim,
        "re": [[float(v) for v in row] for row in a.real],
        "im": [[float(v) for v in row] for row in a.imag],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")
