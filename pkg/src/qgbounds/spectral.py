"""Discrete spectral tools for weighted multigraphs.

Holds the symmetric normalized Laplacian, a self-contained cyclic Jacobi
eigensolver, and the Cheeger-constant machinery used to sandwich the second
normalized eigenvalue.  The Jacobi solver is deliberately independent of
the finite-difference oracle's LAPACK path so the two never share a code
route when they cross-check each other.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (
    Disconnected,
    IsolatedVertex,
    NoConvergence,
    NotSymmetric,
    TooLarge,
)

_CHEEGER_CAP = 22


def default_tol() -> float:
    """Baseline numerical tolerance; override with the QGB_TOL env var."""
    raw = os.environ.get("QGB_TOL")
    if raw is None:
        return 1e-12
    try:
        val = float(raw)
    except ValueError:
        return 1e-12
    return val if val > 0 else 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Finite weighted graph without parallel edges.

    vertices are labels; edges is a tuple of (u, v, weight) with exact
    weights where possible.  Loops are not allowed here: callers reduce
    multigraphs first."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        idx = {v: i for i, v in enumerate(self.vertices)}
        for u, v, w in self.edges:
            if u not in idx or v not in idx:
                raise NotSymmetric(f"edge ({u!r}, {v!r}) references unknown vertex")
            if u == v:
                raise NotSymmetric(f"loop at {u!r} not supported")
            if not w > 0:
                raise NotSymmetric(f"edge ({u!r}, {v!r}) has nonpositive weight {w}")

    @property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def degree_vector(self):
        deg = [Fraction(0)] * len(self.vertices)
        idx = self.index
        for u, v, w in self.edges:
            deg[idx[u]] += w
            deg[idx[v]] += w
        return deg

    @property
    def volume(self):
        return sum(self.degree_vector(), start=Fraction(0))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: [] for v in self.vertices}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.vertices[0]}
        queue = [self.vertices[0]]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(self.vertices)


def reduce_multigraph(vertices: Sequence, raw_edges: Sequence) -> WeightedGraph:
    """Merge parallel (u, v, w) edges by adding weights; reject loops upstream."""
    acc: dict = {}
    for u, v, w in raw_edges:
        key = (u, v) if str(u) <= str(v) else (v, u)
        acc[key] = acc.get(key, Fraction(0)) + w
    edges = tuple((u, v, w) for (u, v), w in sorted(acc.items(), key=lambda t: (str(t[0][0]), str(t[0][1]))))
    return WeightedGraph(tuple(vertices), edges)


def underlying_weighted(g, weight: str = "unit") -> WeightedGraph:
    """Weighted graph underlying a metric graph.

    weight="unit" counts parallel edges with multiplicity one each (merged
    by addition); weight="length" uses edge lengths as weights."""
    raw = []
    for e in g.edges:
        if e.u == e.v:
            raise NotSymmetric(f"loop {e.id!r}: split loops before reducing")
        w = Fraction(1) if weight == "unit" else e.length
        raw.append((e.u, e.v, w))
    return reduce_multigraph(g.vertices, raw)


def adjacency_matrix(wg: WeightedGraph) -> np.ndarray:
    n = len(wg.vertices)
    A = np.zeros((n, n))
    idx = wg.index
    for u, v, w in wg.edges:
        A[idx[u], idx[v]] += float(w)
        A[idx[v], idx[u]] += float(w)
    return A


def normalized_laplacian_sym(wg: WeightedGraph) -> np.ndarray:
    """Symmetric normalized Laplacian I - D^{-1/2} A D^{-1/2}."""
    deg = wg.degree_vector()
    for v, d in zip(wg.vertices, deg):
        if d == 0:
            raise IsolatedVertex(f"vertex {v!r} has weighted degree zero")
    A = adjacency_matrix(wg)
    dinv = np.array([1.0 / math.sqrt(float(d)) for d in deg])
    n = len(wg.vertices)
    return np.eye(n) - (dinv[:, None] * A) * dinv[None, :]


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending, plus the off-diagonal residual actually
    achieved by the sweep that produced them."""

    values: tuple
    achieved: float
    vectors: Optional[np.ndarray] = None

    def grouped(self, tol: Optional[float] = None) -> list:
        """Cluster near-equal eigenvalues into (value, multiplicity) pairs."""
        tol = 1e-8 if tol is None else tol
        out = []
        for v in self.values:
            if out and abs(v - out[-1][0]) <= tol * max(1.0, abs(v)):
                val, mult = out[-1]
                out[-1] = ((val * mult + v) / (mult + 1), mult + 1)
            else:
                out.append((v, 1))
        return out

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


def eigenvalues_sym(matrix, tol: Optional[float] = None,
                    max_sweeps: int = 60, want_vectors: bool = False) -> Spectrum:
    """All eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Runs full sweeps over the strict upper triangle, rotating away every
    entry whose magnitude exceeds a per-sweep threshold, until the
    off-diagonal Frobenius norm falls below tol * scale."""
    A = np.array(matrix, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n == 0:
        return Spectrum((), 0.0)
    if not np.allclose(A, A.T, atol=1e-10 * max(1.0, float(np.abs(A).max()))):
        raise NotSymmetric("matrix is not symmetric")
    A = (A + A.T) / 2
    V = np.eye(n) if want_vectors else None
    scale = max(float(np.abs(A).max()), 1e-300)
    tol = default_tol() if tol is None else tol
    target = tol * scale

    def offnorm():
        off = A - np.diag(np.diag(A))
        return float(np.sqrt((off * off).sum()))

    if n == 1:
        return Spectrum((float(A[0, 0]),), 0.0,
                        V if want_vectors else None)

    achieved = offnorm()
    for _ in range(max_sweeps):
        if achieved <= target:
            break
        skip = achieved / (2 * n)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                app, aqq = A[p, p], A[q, q]
                theta = (aqq - app) / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = A[q, p] = 0.0
                if V is not None:
                    vp = V[:, p].copy()
                    vq = V[:, q].copy()
                    V[:, p] = c * vp - s * vq
                    V[:, q] = s * vp + c * vq
        achieved = offnorm()
    else:
        if achieved > target:
            raise NoConvergence(
                f"Jacobi sweeps did not reach residual {target:.3e} "
                f"(achieved {achieved:.3e} after {max_sweeps} sweeps)")
    order = np.argsort(np.diag(A), kind="stable")
    values = tuple(float(x) for x in np.diag(A)[order])
    vectors = V[:, order] if V is not None else None
    return Spectrum(values, achieved, vectors)


def normalized_spectrum(wg: WeightedGraph, tol: Optional[float] = None) -> Spectrum:
    return eigenvalues_sym(normalized_laplacian_sym(wg), tol=tol)


# ---------------------------------------------------------------------------
# Cheeger constant and the sandwich for the second eigenvalue


def cheeger_constant(wg: WeightedGraph) -> float:
    """Weighted Cheeger constant by exhaustive cuts.

    h = min over proper vertex subsets S of w(boundary S) / min(vol S,
    vol complement).  Enumerates the 2^(n-1) subsets containing a fixed
    vertex's complement side, so the size cap keeps this affordable."""
    n = len(wg.vertices)
    if n < 2:
        raise TooLarge("Cheeger constant needs at least two vertices")
    if n > _CHEEGER_CAP:
        raise TooLarge(f"{n} vertices exceeds the exhaustive-cut cap {_CHEEGER_CAP}")
    if not wg.is_connected():
        raise Disconnected("Cheeger constant of a disconnected graph is zero")
    idx = wg.index
    deg = np.array([float(d) for d in wg.degree_vector()])
    total = deg.sum()
    ids = np.arange(1, 2 ** (n - 1), dtype=np.uint64)
    membership = np.zeros((len(ids), n), dtype=bool)
    for b in range(n - 1):
        membership[:, b] = (ids >> np.uint64(b)) & np.uint64(1)
    # vertex n-1 is pinned to the complement, so every proper subset shows up once
    cut = np.zeros(len(ids))
    for u, v, w in wg.edges:
        iu, iv = idx[u], idx[v]
        su = membership[:, iu] if iu < n - 1 else np.zeros(len(ids), dtype=bool)
        sv = membership[:, iv] if iv < n - 1 else np.zeros(len(ids), dtype=bool)
        cut += float(w) * (su ^ sv)
    vol = membership @ deg
    ratio = cut / np.minimum(vol, total - vol)
    return float(ratio.min())


def inverse_weight_diameter(wg: WeightedGraph) -> float:
    """Max over vertex pairs of the shortest path metric with edge costs 1/w."""
    n = len(wg.vertices)
    idx = wg.index
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v, w in wg.edges:
        c = 1.0 / float(w)
        iu, iv = idx[u], idx[v]
        if c < dist[iu, iv]:
            dist[iu, iv] = dist[iv, iu] = c
    for k in range(n):
        dist = np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :])
    m = float(dist.max())
    if math.isinf(m):
        raise Disconnected("inverse-weight diameter of a disconnected graph")
    return m


@dataclass(frozen=True)
class Alpha2Sandwich:
    lower_cheeger: float
    lower_diameter: float
    upper: float

    @property
    def lower(self) -> float:
        return max(self.lower_cheeger, self.lower_diameter)

    def to_json(self) -> dict:
        return {
            "lower_cheeger": self.lower_cheeger,
            "lower_diameter": self.lower_diameter,
            "lower": self.lower,
            "upper": self.upper,
        }


def alpha2_sandwich(wg: WeightedGraph) -> Alpha2Sandwich:
    """Two-sided bracket for the second normalized eigenvalue.

    Lower bounds: h^2/2 from the Cheeger inequality and 4/(diam_{1/w} * vol)
    from the inverse-weight diameter; upper bound 2h."""
    h = cheeger_constant(wg)
    diam = inverse_weight_diameter(wg)
    vol = float(wg.volume)
    return Alpha2Sandwich(
        lower_cheeger=h * h / 2,
        lower_diameter=4.0 / (diam * vol),
        upper=2 * h,
    )
