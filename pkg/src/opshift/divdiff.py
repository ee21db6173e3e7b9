"""Divided differences with confluent nodes and their B-spline kernels.

A divided difference of order m over m+1 nodes equals (1/m!) times the
integral of the m-th derivative against a unit-integral B-spline whose
knots are the nodes; fully coincident nodes degenerate to a point
evaluation.  That kernel form is what turns operator trace expressions
into measures, so both routes live here and are cross-checked in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DerivativeOrderError

CLUSTER_RTOL = 1e-8          # vs 1 + node spread
PRODUCT_GAP_RTOL = 1e-4      # fast path needs min gap > this * spread
GL_POINTS = 12
SUBDIV_WIDTH = 0.5           # max subinterval width for smooth integrands

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(q: int) -> tuple[np.ndarray, np.ndarray]:
    if q not in _GL_CACHE:
        _GL_CACHE[q] = np.polynomial.legendre.leggauss(q)
    return _GL_CACHE[q]


@dataclass(frozen=True)
class NodeMultiset:
    """Sorted nodes with multiplicity structure from epsilon-clustering."""

    nodes: tuple[float, ...]                 # canonical: cluster means, repeated
    clusters: tuple[tuple[float, int], ...]  # (mean, multiplicity), ascending

    @classmethod
    def from_values(cls, values) -> "NodeMultiset":
        vals = sorted(float(v) for v in np.atleast_1d(np.asarray(values, dtype=np.float64)))
        if not vals:
            raise ValueError("at least one node is required")
        spread = vals[-1] - vals[0]
        eps = CLUSTER_RTOL * (1.0 + spread)
        clusters: list[list[float]] = [[vals[0]]]
        for v in vals[1:]:
            if v - clusters[-1][-1] <= eps:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        reps = tuple((float(np.mean(c)), len(c)) for c in clusters)
        expanded = tuple(mean for mean, mult in reps for _ in range(mult))
        return cls(nodes=expanded, clusters=reps)

    @property
    def order(self) -> int:
        return len(self.nodes) - 1

    @property
    def max_multiplicity(self) -> int:
        return max(mult for _, mult in self.clusters)

    @property
    def spread(self) -> float:
        return self.nodes[-1] - self.nodes[0]


def _as_multiset(nodes) -> NodeMultiset:
    return nodes if isinstance(nodes, NodeMultiset) else NodeMultiset.from_values(nodes)


def _deriv_at(f, order: int, x: float) -> float:
    if order == 0:
        return float(np.real(f(np.asarray([x]))[0]))
    k_max = getattr(f, "k_max", None)
    if k_max is None or order > k_max:
        raise DerivativeOrderError(getattr(f, "label", repr(f)), order, k_max or 0)
    return float(np.real(f.derivs[order](np.asarray([x]))[0]))


def divided_difference(f, nodes) -> float:
    """Order-m divided difference of f over m+1 (possibly repeated) nodes.

    Nodes are canonically sorted, so the value is exactly permutation
    invariant.  Repeated nodes use derivative oracles; the distinct-node
    product formula is used only when the minimum gap is a safe fraction
    of the spread, otherwise the Newton/Hermite table takes over.
    """
    ms = _as_multiset(nodes)
    m = ms.order
    if len(ms.clusters) == 1:
        x, mult = ms.clusters[0]
        return _deriv_at(f, m, x) / math.factorial(m)
    if ms.max_multiplicity == 1:
        gaps = np.diff(ms.nodes)
        if float(np.min(gaps)) > PRODUCT_GAP_RTOL * ms.spread:
            xs = np.asarray(ms.nodes)
            fx = np.real(f(xs))
            total = 0.0
            for k in range(m + 1):
                denom = np.prod(xs[k] - np.delete(xs, k))
                total += fx[k] / denom
            return float(total)
    # confluent Newton table over the clustered knot vector
    z = ms.nodes
    n = len(z)
    if ms.max_multiplicity >= 2:
        _ = _deriv_at(f, ms.max_multiplicity - 1, z[0])  # fail early if the oracle is short
    col = [float(np.real(f(np.asarray([zi]))[0])) for zi in z]
    for j in range(1, n):
        new = []
        for i in range(n - j):
            if z[i + j] == z[i]:
                new.append(_deriv_at(f, j, z[i]) / math.factorial(j))
            else:
                new.append((col[i + 1] - col[i]) / (z[i + j] - z[i]))
        col = new
    return col[0]


@dataclass(frozen=True)
class PeanoKernel:
    """Unit-mass kernel representing a divided difference against f^(m).

    Either a unit-integral B-spline over the knots or, when every knot
    falls in one cluster, a unit atom at the common knot.
    """

    knots: tuple[float, ...]
    weight: float = 1.0
    is_atom: bool = False

    @property
    def order(self) -> int:
        return len(self.knots) - 1

    @property
    def support(self) -> tuple[float, float]:
        return (self.knots[0], self.knots[-1])


def peano_kernel(nodes) -> PeanoKernel:
    ms = _as_multiset(nodes)
    if len(ms.clusters) == 1:
        return PeanoKernel(knots=ms.nodes, is_atom=True)
    return PeanoKernel(knots=ms.nodes, is_atom=False)


def bspline_density(kernel: PeanoKernel, x) -> np.ndarray:
    """Evaluate the unit-integral B-spline by the de Boor recurrence.

    Seeded from indicator splines; never forms the truncated-power sum,
    which cancels catastrophically for clustered knots.
    """
    if kernel.is_atom:
        raise ValueError("an atom has no density")
    t = np.asarray(kernel.knots, dtype=np.float64)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    k = len(t) - 1  # spline order
    vals = np.zeros((k, x.size))
    for i in range(k):
        width = t[i + 1] - t[i]
        if width > 0:
            vals[i] = ((x >= t[i]) & (x < t[i + 1])).astype(np.float64) / width
    for r in range(2, k + 1):
        nxt = np.zeros((k - r + 1, x.size))
        for i in range(k - r + 1):
            denom = t[i + r] - t[i]
            if denom > 0:
                nxt[i] = r * ((x - t[i]) * vals[i] + (t[i + r] - x) * vals[i + 1]) / ((r - 1) * denom)
        vals = nxt
    return vals[0]


def _pieces(kernel: PeanoKernel) -> list[tuple[float, float]]:
    t = kernel.knots
    return [(t[i], t[i + 1]) for i in range(len(t) - 1) if t[i + 1] > t[i]]


def kernel_integrate(kernel: PeanoKernel, g) -> float:
    """integral of g against the kernel measure.

    Piecewise Gauss-Legendre between consecutive distinct knots, with
    subintervals capped at ``SUBDIV_WIDTH`` so smooth integrands are
    resolved to near machine precision; atoms evaluate g at the knot.
    """
    if kernel.is_atom:
        return kernel.weight * float(np.real(g(np.asarray([kernel.knots[0]]))[0]))
    xg, wg = _gauss_legendre(max(kernel.order + 2, GL_POINTS))
    total = 0.0
    for a, b in _pieces(kernel):
        parts = max(1, math.ceil((b - a) / SUBDIV_WIDTH))
        edges = np.linspace(a, b, parts + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            xs = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
            ws = 0.5 * (hi - lo) * wg
            total += float(np.dot(ws * bspline_density(kernel, xs), np.real(g(xs))))
    return kernel.weight * total


def kernel_plus_moment(kernel: PeanoKernel, p: int, xs) -> np.ndarray:
    """integral of (x - s)_+^p against the kernel, vectorized over x.

    Exact for the piecewise-polynomial integrand: each knot interval is a
    single polynomial piece, and the integration range is split at x.
    For p = 0 this is the kernel's cumulative distribution function.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if kernel.is_atom:
        knot = kernel.knots[0]
        if p == 0:
            return kernel.weight * (xs >= knot).astype(np.float64)
        return kernel.weight * np.where(xs >= knot, (xs - knot) ** p, 0.0)
    xg, wg = _gauss_legendre(max(kernel.order + 2, GL_POINTS))
    out = np.zeros_like(xs)
    for a, b in _pieces(kernel):
        after = xs >= b
        if np.any(after):
            nodes = 0.5 * (b - a) * xg + 0.5 * (b + a)
            wm = 0.5 * (b - a) * wg * bspline_density(kernel, nodes)
            out[after] += (xs[after, None] - nodes[None, :]) ** p @ wm
        inside = (xs > a) & (xs < b)
        if np.any(inside):
            xi = xs[inside]
            half = 0.5 * (xi - a)
            nodes = a + half[:, None] * (xg[None, :] + 1.0)
            ws = half[:, None] * wg[None, :]
            mv = bspline_density(kernel, nodes.ravel()).reshape(nodes.shape)
            out[inside] += np.sum(ws * mv * (xi[:, None] - nodes) ** p, axis=1)
    return kernel.weight * out


def kernel_cdf(kernel: PeanoKernel, xs) -> np.ndarray:
    return kernel_plus_moment(kernel, 0, xs)
