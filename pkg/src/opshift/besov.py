"""Scalar test functions, dyadic frequency pieces and smoothness seminorms.

The abstract distribution framework is replaced by a concrete corpus of
functions carrying exact derivative oracles and exact Fourier metadata;
seminorms are computed only for corpus members (and their finite linear
combinations), which is all the rest of the package needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import (
    DerivativeOrderError,
    DivergenceError,
    UnsupportedFunctionError,
)


@dataclass(frozen=True)
class BesovConfig:
    """Grid and truncation constants; one record, overridable by the cli."""

    grid_halfwidth: float = 50.0
    grid_points: int = 16384
    t_min: float = 1e-4
    t_max: float = 1e4
    resolve_until: float = 200.0   # resolve oscillations in t up to here
    fourier_base_points: int = 256
    fourier_rel_tol: float = 1e-10
    tail_tol: float = 1e-8
    n_cap: int = 48

    def probe_grid(self) -> np.ndarray:
        return np.linspace(-self.grid_halfwidth, self.grid_halfwidth, self.grid_points)


DEFAULT_CONFIG = BesovConfig()


# -- smooth functions ---------------------------------------------------------


@dataclass(frozen=True)
class FourierInfo:
    """Exact transform data: point spectrum atoms plus a continuous part.

    ``atoms`` lists (frequency, amplitude) pairs with f(x) = sum a exp(i w x);
    ``cont`` is the transform F(xi) = int f(x) exp(-i x xi) dx of the
    continuous part, vanishing outside ``cont_support`` when that is set.
    """

    atoms: tuple[tuple[float, complex], ...] = ()
    cont: Callable[[np.ndarray], np.ndarray] | None = None
    cont_support: tuple[float, float] | None = None


@dataclass(frozen=True)
class SmoothFunction:
    """A scalar function with derivative oracles up to a fixed order."""

    label: str
    derivs: tuple[Callable[[np.ndarray], np.ndarray], ...]
    band_limit: float | None = None
    fourier: FourierInfo | None = None
    poly_degree: int | None = None

    def __call__(self, x):
        return self.derivs[0](np.asarray(x, dtype=np.float64))

    @property
    def k_max(self) -> int:
        return len(self.derivs) - 1

    def deriv(self, k: int) -> "SmoothFunction":
        if k == 0:
            return self
        if k > self.k_max:
            raise DerivativeOrderError(self.label, k, self.k_max)
        return SmoothFunction(
            label=f"{self.label}^({k})",
            derivs=self.derivs[k:],
            band_limit=self.band_limit,
            poly_degree=max(self.poly_degree - k, 0) if self.poly_degree is not None else None,
        )

    def __add__(self, other: "SmoothFunction") -> "SmoothFunction":
        k = min(self.k_max, other.k_max)
        mine, theirs = self.derivs, other.derivs

        def mk(r):
            return lambda x, _r=r: mine[_r](x) + theirs[_r](x)

        fourier = None
        if self.fourier is not None and other.fourier is not None:
            conts = [fi.cont for fi in (self.fourier, other.fourier) if fi.cont is not None]
            if len(conts) == 2:
                cont = lambda xi: conts[0](xi) + conts[1](xi)
            elif conts:
                cont = conts[0]
            else:
                cont = None
            supports = [
                fi.cont_support
                for fi in (self.fourier, other.fourier)
                if fi.cont is not None
            ]
            if any(s is None for s in supports):
                support = None
            elif supports:
                support = (min(s[0] for s in supports), max(s[1] for s in supports))
            else:
                support = None
            fourier = FourierInfo(
                atoms=self.fourier.atoms + other.fourier.atoms,
                cont=cont,
                cont_support=support,
            )
        bl = None
        if self.band_limit is not None and other.band_limit is not None:
            bl = max(self.band_limit, other.band_limit)
        pd = None
        if self.poly_degree is not None and other.poly_degree is not None:
            pd = max(self.poly_degree, other.poly_degree)
        return SmoothFunction(
            label=f"({self.label}+{other.label})",
            derivs=tuple(mk(r) for r in range(k + 1)),
            band_limit=bl,
            fourier=fourier,
            poly_degree=pd,
        )

    def scaled(self, alpha: float) -> "SmoothFunction":
        mine = self.derivs

        def mk(r):
            return lambda x, _r=r: alpha * mine[_r](x)

        fourier = None
        if self.fourier is not None:
            cont = self.fourier.cont
            fourier = FourierInfo(
                atoms=tuple((w, alpha * a) for w, a in self.fourier.atoms),
                cont=(lambda xi, _c=cont: alpha * _c(xi)) if cont is not None else None,
                cont_support=self.fourier.cont_support,
            )
        return replace(
            self,
            label=f"{alpha:g}*{self.label}",
            derivs=tuple(mk(r) for r in range(self.k_max + 1)),
            fourier=fourier,
        )

    def dilated(self, sigma: float) -> "SmoothFunction":
        """x -> f(sigma x), with derivative oracles rescaled accordingly."""
        mine = self.derivs

        def mk(r):
            return lambda x, _r=r: (sigma**_r) * mine[_r](sigma * np.asarray(x, dtype=np.float64))

        bl = self.band_limit * sigma if self.band_limit is not None else None
        return SmoothFunction(
            label=f"{self.label}@{sigma:g}",
            derivs=tuple(mk(r) for r in range(self.k_max + 1)),
            band_limit=bl,
            poly_degree=self.poly_degree,
        )


_GATE_GRID = np.linspace(-3.0, 3.0, 41)
_GATE_H = 1e-5


def _consistency_gate(f: SmoothFunction) -> SmoothFunction:
    """Check deriv(k) against central differences of deriv(k-1)."""
    for k in range(1, f.k_max + 1):
        lo = f.derivs[k - 1]
        hi = f.derivs[k]
        approx = (lo(_GATE_GRID + _GATE_H) - lo(_GATE_GRID - _GATE_H)) / (2 * _GATE_H)
        exact = hi(_GATE_GRID)
        scale = 1.0 + float(np.max(np.abs(exact)))
        err = float(np.max(np.abs(approx - exact)))
        if err > 1e-6 * scale:
            raise ValueError(
                f"derivative oracle of {f.label!r} fails self-consistency at "
                f"order {k}: error {err:.3e} vs scale {scale:.3e}"
            )
    return f


def gaussian(a: float = 1.0, c: float = 0.0, k_max: int = 6, label: str | None = None) -> SmoothFunction:
    """exp(-a (x-c)^2) with polynomial-recurrence derivatives."""
    polys = [np.polynomial.Polynomial([1.0])]
    for _ in range(k_max):
        pk = polys[-1]
        polys.append(pk.deriv() - np.polynomial.Polynomial([0.0, 2.0 * a]) * pk)

    def mk(k):
        pk = polys[k]
        return lambda x, _p=pk: _p(np.asarray(x, np.float64) - c) * np.exp(-a * (np.asarray(x, np.float64) - c) ** 2)

    amp = math.sqrt(math.pi / a)
    fourier = FourierInfo(
        cont=lambda xi: amp * np.exp(-np.asarray(xi, np.float64) ** 2 / (4 * a)) * np.exp(-1j * c * np.asarray(xi, np.float64)),
        cont_support=None,
    )
    return _consistency_gate(
        SmoothFunction(
            label=label or f"gauss(a={a:g},c={c:g})",
            derivs=tuple(mk(k) for k in range(k_max + 1)),
            fourier=fourier,
        )
    )


def rational(b: float = 1.0, c: float = 0.0, k_max: int = 6, label: str | None = None) -> SmoothFunction:
    """1 / ((x-c)^2 + b^2); derivatives via complex partial fractions."""

    def mk(k):
        fact = (-1.0) ** k * math.factorial(k)
        return lambda x, _f=fact, _k=k: _f * np.imag(
            (np.asarray(x, np.float64) - c - 1j * b) ** (-(_k + 1))
        ) / b

    fourier = FourierInfo(
        cont=lambda xi: (math.pi / b) * np.exp(-b * np.abs(np.asarray(xi, np.float64))) * np.exp(-1j * c * np.asarray(xi, np.float64)),
        cont_support=None,
    )
    return _consistency_gate(
        SmoothFunction(
            label=label or f"rational(b={b:g},c={c:g})",
            derivs=tuple(mk(k) for k in range(k_max + 1)),
            fourier=fourier,
        )
    )


def sinusoid(kind: str = "sin", omega: float = 1.0, phi: float = 0.0, k_max: int = 6, label: str | None = None) -> SmoothFunction:
    """sin(omega x + phi) or cos(omega x + phi); point spectrum at +/- omega."""
    base = 0.0 if kind == "sin" else math.pi / 2
    if kind not in ("sin", "cos"):
        raise ValueError(f"kind must be 'sin' or 'cos', got {kind!r}")

    def mk(k):
        shift = base + k * math.pi / 2
        return lambda x, _s=shift: (omega**k) * np.sin(omega * np.asarray(x, np.float64) + phi + _s)

    if kind == "sin":
        atoms = ((omega, np.exp(1j * phi) / 2j), (-omega, -np.exp(-1j * phi) / 2j))
    else:
        atoms = ((omega, np.exp(1j * phi) / 2), (-omega, np.exp(-1j * phi) / 2))
    return _consistency_gate(
        SmoothFunction(
            label=label or f"{kind}(w={omega:g},phi={phi:g})",
            derivs=tuple(mk(k) for k in range(k_max + 1)),
            band_limit=abs(omega),
            fourier=FourierInfo(atoms=atoms),
        )
    )


_FEJER_SERIES_TERMS = 40
_FEJER_SWITCH = 4.0  # on |sigma x| <= this, use the power series


def fejer(sigma: float = 1.0, k_max: int = 6, label: str | None = None) -> SmoothFunction:
    """(sin(sigma x / 2) / (sigma x / 2))^2, band-limited to [-sigma, sigma]."""

    # power series of (sin u / u)^2 in u = sigma x / 2
    series = np.array(
        [(-1.0) ** r * 2.0 ** (2 * r + 1) / math.factorial(2 * r + 2) for r in range(_FEJER_SERIES_TERMS)]
    )

    def series_deriv(x, k):
        u = (sigma / 2.0) * x
        out = np.zeros_like(u)
        for r in range(_FEJER_SERIES_TERMS):
            p = 2 * r
            if p < k:
                continue
            coef = series[r]
            for i in range(k):
                coef *= p - i
            out += coef * u ** (p - k)
        return out * (sigma / 2.0) ** k

    def closed_deriv(x, k):
        # f = (2/sigma^2) * h(x) x^{-2}, h = 1 - cos(sigma x)
        total = np.zeros_like(x)
        for j in range(k + 1):
            if j == 0:
                hj = 1.0 - np.cos(sigma * x)
            else:
                hj = -np.real((1j * sigma) ** j * np.exp(1j * sigma * x))
            l = k - j
            gl = (-1.0) ** l * math.factorial(l + 1) * x ** (-(l + 2))
            total += math.comb(k, j) * hj * gl
        return (2.0 / sigma**2) * total

    def mk(k):
        def d(x, _k=k):
            x = np.atleast_1d(np.asarray(x, np.float64))
            out = np.empty_like(x)
            near = np.abs(sigma * x) <= _FEJER_SWITCH
            if np.any(near):
                out[near] = series_deriv(x[near], _k)
            if np.any(~near):
                out[~near] = closed_deriv(x[~near], _k)
            return out if out.shape else float(out)

        return d

    fourier = FourierInfo(
        cont=lambda xi: (2 * math.pi / sigma) * np.clip(1.0 - np.abs(np.asarray(xi, np.float64)) / sigma, 0.0, None),
        cont_support=(-sigma, sigma),
    )
    return _consistency_gate(
        SmoothFunction(
            label=label or f"fejer{sigma:g}",
            derivs=tuple(mk(k) for k in range(k_max + 1)),
            band_limit=sigma,
            fourier=fourier,
        )
    )


def monomial(k: int, k_max: int = 6, label: str | None = None) -> SmoothFunction:
    """x^k, flagged polynomial; excluded from the Besov-norm operations."""

    def mk(r):
        if r > k:
            return lambda x: np.zeros_like(np.asarray(x, np.float64))
        coef = math.perm(k, r)
        return lambda x, _c=coef, _p=k - r: _c * np.asarray(x, np.float64) ** _p

    return SmoothFunction(
        label=label or f"x{k}",
        derivs=tuple(mk(r) for r in range(k_max + 1)),
        poly_degree=k,
    )


def corpus(m_max: int = 4) -> list[SmoothFunction]:
    """The deterministic test-function corpus with oracles to order >= m_max."""
    k_max = max(4, m_max + 2)
    members = [
        gaussian(1.0, 0.0, k_max, label="gauss"),
        gaussian(0.5, -0.6, k_max, label="gauss2"),
        rational(1.0, 0.0, k_max, label="rational"),
        rational(0.7, 0.8, k_max, label="rational2"),
        sinusoid("sin", 1.0, 0.0, k_max, label="sin"),
        sinusoid("cos", 1.0, 0.0, k_max, label="cos"),
        fejer(1.0, k_max, label="fejer1"),
        fejer(2.0, k_max, label="fejer2"),
        fejer(4.0, k_max, label="fejer4"),
        fejer(8.0, k_max, label="fejer8"),
    ]
    members += [monomial(k, k_max) for k in range(m_max + 1)]
    return members


def corpus_member(label: str, m_max: int = 4) -> SmoothFunction:
    for f in corpus(m_max):
        if f.label == label:
            return f
    raise KeyError(f"no corpus member labelled {label!r}")


# -- the dyadic window --------------------------------------------------------


def _bump(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _step(x: np.ndarray) -> np.ndarray:
    b0 = _bump(x)
    b1 = _bump(1.0 - x)
    out = np.zeros_like(x)
    nz = (b0 + b1) > 0
    out[nz] = b0[nz] / (b0[nz] + b1[nz])
    out[x >= 1.0] = 1.0
    return out


@dataclass(frozen=True)
class Window:
    """A smooth bump w supported on [1/2, 2] with w(x) + w(x/2) = 1 on [1, 2]."""

    w: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.w(np.asarray(x, dtype=np.float64))


def make_window() -> Window:
    def w(x: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        out = np.zeros_like(x)
        rising = (x >= 0.5) & (x <= 1.0)
        out[rising] = _step(2.0 * x[rising] - 1.0)
        falling = (x > 1.0) & (x < 2.0)
        # w(x) = 1 - w(x/2) with x/2 in (1/2, 1)
        out[falling] = 1.0 - _step(x[falling] - 1.0)
        return out if out.shape != (1,) else out.reshape(1)

    return Window(w=w)


def window_partition_sum(x: float, window: Window | None = None) -> float:
    """sum_n w(x / 2^n) over the at most two contributing dyadic levels."""
    if x <= 0:
        raise ValueError("the dyadic partition covers x > 0 only")
    win = window or make_window()
    n0 = math.floor(math.log2(x))
    total = 0.0
    for n in range(n0 - 1, n0 + 3):
        total += float(win(np.asarray([x / 2.0**n]))[0])
    return total


# -- frequency pieces ---------------------------------------------------------


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(q: int) -> tuple[np.ndarray, np.ndarray]:
    if q not in _GL_CACHE:
        _GL_CACHE[q] = np.polynomial.legendre.leggauss(q)
    return _GL_CACHE[q]


def _zero_function(label: str, k_max: int) -> SmoothFunction:
    zero = lambda x: np.zeros_like(np.asarray(x, np.float64))
    return SmoothFunction(label=label, derivs=(zero,) * (k_max + 1), poly_degree=0)


def lp_piece(f: SmoothFunction, n: int, cfg: BesovConfig = DEFAULT_CONFIG) -> SmoothFunction:
    """The frequency piece of f localized to the dyadic band 2^n.

    Point-spectrum parts are windowed exactly; continuous parts are
    inverted numerically on the compact band, with node doubling until the
    values on a probe set stabilize to ``cfg.fourier_rel_tol``.
    """
    if f.fourier is None:
        raise UnsupportedFunctionError(
            f"{f.label!r} carries no Fourier metadata; cannot form dyadic pieces"
        )
    win = make_window()
    scale = 2.0**n
    k_max = f.k_max

    atom_terms: list[tuple[float, complex]] = []
    for freq, amp in f.fourier.atoms:
        factor = float(win(np.asarray([freq / scale]))[0] + win(np.asarray([-freq / scale]))[0])
        if factor != 0.0:
            atom_terms.append((freq, amp * factor))

    nodes = np.zeros(0)
    coefs = np.zeros(0, dtype=np.complex128)
    if f.fourier.cont is not None:
        lo, hi = scale / 2.0, scale * 2.0
        if f.fourier.cont_support is not None:
            hi = min(hi, f.fourier.cont_support[1])
        if hi > lo:
            probe = np.linspace(-cfg.grid_halfwidth, cfg.grid_halfwidth, 17)
            prev = None
            q = cfg.fourier_base_points
            while True:
                xg, wg = _gauss_legendre(q)
                xi = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
                wq = 0.5 * (hi - lo) * wg
                cand = wq * win(xi / scale) * f.fourier.cont(xi) / math.pi
                vals = np.real(np.exp(1j * np.outer(probe, xi)) @ cand)
                if prev is not None:
                    ref = 1.0 + float(np.max(np.abs(vals)))
                    if float(np.max(np.abs(vals - prev))) <= cfg.fourier_rel_tol * ref or q >= 16384:
                        nodes, coefs = xi, cand
                        break
                prev = vals
                q *= 2

    if not atom_terms and nodes.size == 0:
        return _zero_function(f"{f.label}_n{n}", k_max)

    def mk(k):
        def d(x, _k=k):
            x = np.atleast_1d(np.asarray(x, np.float64))
            out = np.zeros_like(x)
            if nodes.size:
                c = coefs * (1j * nodes) ** _k
                for start in range(0, x.size, 2048):
                    blk = x[start : start + 2048]
                    out[start : start + 2048] = np.real(np.exp(1j * np.outer(blk, nodes)) @ c)
            for freq, amp in atom_terms:
                out += np.real(amp * (1j * freq) ** _k * np.exp(1j * freq * x))
            return out

        return d

    return SmoothFunction(label=f"{f.label}_n{n}", derivs=tuple(mk(k) for k in range(k_max + 1)))


def delta_power(f: SmoothFunction, t: float, k: int) -> SmoothFunction:
    """The k-fold difference (Delta_t^k f)(x) = sum_j (-1)^(k-j) C(k,j) f(x + j t)."""
    if k < 1:
        raise ValueError("difference order must be at least 1")
    signs = [(-1.0) ** (k - j) * math.comb(k, j) for j in range(k + 1)]

    def mk(r):
        base = f.derivs[r]

        def d(x, _b=base):
            x = np.asarray(x, np.float64)
            out = signs[0] * _b(x)
            for j in range(1, k + 1):
                out = out + signs[j] * _b(x + j * t)
            return out

        return d

    pd = None
    if f.poly_degree is not None:
        pd = max(f.poly_degree - k, 0)
    return SmoothFunction(
        label=f"D[{t:g}]^{k} {f.label}",
        derivs=tuple(mk(r) for r in range(f.k_max + 1)),
        band_limit=f.band_limit,
        poly_degree=pd,
    )


# -- seminorms ----------------------------------------------------------------


def _t_panels(cfg: BesovConfig, m: int) -> list[tuple[float, float]]:
    """Panel edges covering [t_min, t_max]: log-spaced, refined where the
    difference norm can oscillate on a unit scale, log-spaced again in the
    far tail where only the envelope matters."""
    panels = []
    t = cfg.t_min
    while t < min(8.0, cfg.t_max):
        nxt = min(t * 10 ** (1.0 / 16.0), min(8.0, cfg.t_max))
        panels.append((t, nxt))
        t = nxt
    while t < min(cfg.resolve_until, cfg.t_max):
        nxt = min(t + 1.5, cfg.resolve_until, cfg.t_max)
        panels.append((t, nxt))
        t = nxt
    if t < cfg.t_max:
        edges = np.geomspace(t, cfg.t_max, 33)
        panels.extend(zip(edges[:-1], edges[1:]))
    return panels


def besov_seminorm_diff(f: SmoothFunction, m: int, cfg: BesovConfig = DEFAULT_CONFIG) -> float:
    """int ||Delta_t^{m+1} f||_inf / |t|^{1+m} dt, sup taken over the probe grid."""
    if f.poly_degree is not None:
        if f.poly_degree <= m:
            return 0.0
        raise DivergenceError(
            f"{f.label!r} is a polynomial of degree {f.poly_degree} > {m}; "
            f"the order-{m} difference seminorm diverges"
        )
    grid = cfg.probe_grid()
    signs = np.array([(-1.0) ** (m + 1 - j) * math.comb(m + 1, j) for j in range(m + 2)])

    def sup_norm(ts: np.ndarray) -> np.ndarray:
        out = np.zeros_like(ts)
        for i, t in enumerate(ts):
            acc = signs[0] * f(grid)
            for j in range(1, m + 2):
                acc = acc + signs[j] * f(grid + j * t)
            out[i] = np.max(np.abs(acc))
        return out

    xg, wg = _gauss_legendre(8)
    total = 0.0
    first_value = None
    last_value = 0.0
    for lo, hi in _t_panels(cfg, m):
        ts = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        ws = 0.5 * (hi - lo) * wg
        vals = sup_norm(ts) / ts ** (1 + m)
        if first_value is None:
            first_value = float(vals[0])
        last_value = float(vals[-1])
        total += float(np.dot(ws, vals))
    total *= 2.0  # the two signs of t contribute equally
    tail_low = first_value * cfg.t_min if first_value else 0.0
    tail_high = last_value * cfg.t_max / max(m, 1)
    if total > 0 and (tail_low > 5e-3 * total or tail_high > 5e-3 * total):
        raise DivergenceError(
            f"difference seminorm of {f.label!r} does not converge: "
            f"tail estimates {tail_low:.3e} / {tail_high:.3e} vs bulk {total:.3e}"
        )
    return total


def _piece_bound(f: SmoothFunction, n: int) -> float:
    """Upper bound on ||f_n||_inf from the transform magnitude."""
    bound = 0.0
    win = make_window()
    scale = 2.0**n
    for freq, amp in (f.fourier.atoms if f.fourier else ()):
        factor = float(win(np.asarray([freq / scale]))[0] + win(np.asarray([-freq / scale]))[0])
        bound += abs(amp) * factor
    if f.fourier and f.fourier.cont is not None:
        lo, hi = scale / 2.0, scale * 2.0
        if f.fourier.cont_support is not None:
            hi = min(hi, f.fourier.cont_support[1])
        if hi > lo:
            xg, wg = _gauss_legendre(64)
            xi = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
            wq = 0.5 * (hi - lo) * wg
            bound += float(np.dot(wq, np.abs(f.fourier.cont(xi)))) / math.pi
    return bound


def besov_seminorm_lp(
    f: SmoothFunction, m: int, cfg: BesovConfig = DEFAULT_CONFIG, return_table: bool = False
):
    """sum_n 2^{n m} ||f_n||_inf with the tail truncated below ``cfg.tail_tol``."""
    if f.fourier is None:
        raise UnsupportedFunctionError(
            f"{f.label!r} carries no Fourier metadata; the dyadic seminorm is unavailable"
        )
    table: list[tuple[int, float]] = []
    total = 0.0

    def piece_norm(n: int) -> float:
        bound = _piece_bound(f, n) * 2.0**(n * m)
        if total > 0 and bound < 0.25 * cfg.tail_tol * total:
            return bound  # certified negligible; skip the grid evaluation
        piece = lp_piece(f, n, cfg)
        halfwidth = cfg.grid_halfwidth
        # resolve the band's oscillation without paying the full grid for slow pieces
        points = int(min(cfg.grid_points, max(256, 16 * halfwidth * 2.0 ** (n + 1) / math.pi)))
        g = np.linspace(-halfwidth, halfwidth, points)
        return float(np.max(np.abs(piece(g)))) * 2.0**(n * m)

    for direction in (+1, -1):
        n = 0 if direction > 0 else -1
        misses = 0
        while abs(n) <= cfg.n_cap:
            term = piece_norm(n)
            table.append((n, term))
            total += term
            if total > 0 and term < cfg.tail_tol * total:
                misses += 1
                if misses >= 3:
                    break
            else:
                misses = 0
            n += direction
    table.sort()
    if return_table:
        return total, table
    return total
