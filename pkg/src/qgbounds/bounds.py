"""Eigenvalue lower bounds for metric graphs.

The central estimate: given an m-fold cover of a graph by connected
subgraphs, every Laplacian eigenvalue of the whole graph is bounded below
by ((m-1)/m) * eta * alpha_i, where eta is the smallest spectral gap among
the cover elements and alpha_i runs over the normalized-Laplacian spectrum
of the overlap (vicinity) graph.  Everything else in this module is either
a specialization of that estimate (stars, cycles, pumpkin chains) or a
classical whole-graph bound used for comparison.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .covers import Cover, build_cover, cover_fold, element_subgraph, validate_cover, vicinity_graph
from .errors import (
    BadParameter,
    BadSpec,
    Disconnected,
    EtaUnavailable,
    LoopPresent,
    NotDoublyConnected,
)
from .metric_graph import (
    MetricGraph,
    PumpkinChainSpec,
    is_connected,
    is_cycle_graph,
    is_doubly_connected,
    is_star_graph,
    metric_diameter,
)
from .spectral import normalized_spectrum, underlying_weighted

PI2 = math.pi**2


def _nonneg(alpha: float, snap: float = 1e-12) -> float:
    # normalized-Laplacian eigenvalues sit in [0, 2]; anything below snap
    # is a zero mode seen through rounding, and must not leak into a
    # positive lower bound for an eigenvalue that is exactly zero
    return alpha if alpha > snap else 0.0


# ---------------------------------------------------------------------------
# eta strategies: rigorous lower bounds for the spectral gap of one element
# ---------------------------------------------------------------------------


def _eta_exact_cycle(sub: MetricGraph) -> float:
    """Spectral gap of a cycle of total length L is exactly 4 pi^2 / L^2."""
    if not is_cycle_graph(sub):
        raise EtaUnavailable(
            "element is not a cycle", strategy="exact_cycle", vertices=len(sub.vertices)
        )
    return 4.0 * PI2 / float(sub.total_length) ** 2


def _eta_doubly_connected(sub: MetricGraph) -> float:
    if not is_doubly_connected(sub):
        raise EtaUnavailable("element is not doubly connected", strategy="doubly_connected")
    return 4.0 * PI2 / float(sub.total_length) ** 2


def _eta_nicaise(sub: MetricGraph) -> float:
    """pi^2 / L^2: valid for any connected graph of total length L."""
    return PI2 / float(sub.total_length) ** 2


def star_gap_bound(sub: MetricGraph) -> float:
    """Best of three gap bounds for a star-shaped element.

    A star (edges sharing one center, parallel edges allowed) of total
    length S with longest edge l and diameter D satisfies all of

        lambda_2 >= pi^2 / (4 l^2)      (quarter wave on the longest edge)
        lambda_2 >= pi^2 / S^2          (total-length bound)
        lambda_2 >= 1 / (D * S)         (diameter times total length)

    and we may take the maximum.
    """
    if not is_star_graph(sub):
        raise EtaUnavailable("element is not a star", strategy="star_best")
    lengths = sorted((float(e.length) for e in sub.edges), reverse=True)
    l_max = lengths[0]
    total = float(sub.total_length)
    diam = lengths[0] + lengths[1] if len(lengths) >= 2 else 2.0 * lengths[0]
    return max(PI2 / (4.0 * l_max**2), PI2 / total**2, 1.0 / (diam * total))


def _eta_oracle(sub: MetricGraph) -> float:
    from . import oracle

    return oracle.spectrum(sub, count=2).gap


ETA_STRATEGIES: Mapping[str, Callable[[MetricGraph], float]] = {
    "exact_cycle": _eta_exact_cycle,
    "doubly_connected": _eta_doubly_connected,
    "nicaise": _eta_nicaise,
    "star_best": star_gap_bound,
    "oracle": _eta_oracle,
}

#: strategies whose output is a closed-form certificate rather than a
#: numerical approximation
RIGOROUS_ETA = frozenset(ETA_STRATEGIES) - {"oracle"}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Per-index lower bounds from one method, with its ingredients.

    ``indices[j]`` is the eigenvalue index (1-based, so index 1 is the
    zero eigenvalue) that ``bounds[j]`` applies to.  ``ingredients`` holds
    everything needed to recompute the numbers: the fold, the per-element
    eta values, the alpha spectrum, and any method-specific scalars.
    ``upper_bounds`` maps an index to a comparison upper bound when the
    method provides one.
    """

    method: str
    indices: tuple[int, ...]
    bounds: tuple[float, ...]
    ingredients: dict
    upper_bounds: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.bounds):
            raise BadSpec("indices and bounds disagree in length", method=self.method)
        if any(b > a + 1e-12 for a, b in zip(self.bounds[1:], self.bounds)):
            raise BadSpec("bounds not sorted by index", method=self.method)

    def bound(self, index: int) -> float:
        try:
            return self.bounds[self.indices.index(index)]
        except ValueError:
            raise BadParameter(
                "no bound at this index", method=self.method, index=index
            ) from None

    def to_json(self) -> dict:
        out = {
            "method": self.method,
            "indices": list(self.indices),
            "bounds": list(self.bounds),
            "ingredients": _json_clean(self.ingredients),
        }
        if self.upper_bounds:
            out["upper_bounds"] = {str(k): v for k, v in self.upper_bounds.items()}
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def _json_clean(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, dict):
        return {str(k): _json_clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_clean(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# the transference bound
# ---------------------------------------------------------------------------


def transfer_bound(
    g: MetricGraph,
    cover: Cover,
    eta: str = "exact_cycle",
    *,
    index_limit: int | None = None,
) -> BoundReport:
    """Lower bounds lambda_i >= ((m-1)/m) * eta * alpha_i from an m-fold cover.

    ``eta`` names a strategy from :data:`ETA_STRATEGIES`; the scale factor is
    the minimum of the strategy's value over all elements.  A disconnected
    vicinity graph is not an error: alpha_2 = 0 then makes the nontrivial
    bounds vanish, and the report is flagged ``disconnected_vicinity``.
    """
    if eta not in ETA_STRATEGIES:
        raise BadParameter("unknown eta strategy", eta=eta, known=sorted(ETA_STRATEGIES))
    validate_cover(g, cover)
    fold = cover_fold(g, cover)
    gamma = vicinity_graph(g, cover)
    alpha = normalized_spectrum(gamma).values

    strategy = ETA_STRATEGIES[eta]
    eta_per_element = {}
    for label in cover.labels:
        try:
            eta_per_element[label] = strategy(element_subgraph(g, cover, label))
        except EtaUnavailable as exc:
            raise EtaUnavailable(
                str(exc), element=label, **{k: v for k, v in exc.context.items() if k != "element"}
            ) from None
    eta_value = min(eta_per_element.values())

    flags = []
    if eta == "oracle":
        flags.append("numerically_assisted")
    if not gamma.is_connected():
        flags.append("disconnected_vicinity")

    prefactor = (fold - 1) / fold * eta_value
    k = len(alpha) if index_limit is None else min(index_limit, len(alpha))
    bounds = tuple(prefactor * _nonneg(alpha[i]) for i in range(k))
    return BoundReport(
        method=f"transfer[{cover.name},{eta}]",
        indices=tuple(range(1, k + 1)),
        bounds=bounds,
        ingredients={
            "fold": fold,
            "eta": eta_value,
            "eta_strategy": eta,
            "eta_per_element": eta_per_element,
            "alpha": list(alpha),
            "cover": cover.name,
            "element_count": len(cover),
        },
        flags=tuple(flags),
    )


# ---------------------------------------------------------------------------
# specialized bounds
# ---------------------------------------------------------------------------


def star_bound(g: MetricGraph) -> BoundReport:
    """Whole-graph bounds from the cover by vertex stars.

    With l_max the longest edge, wdeg_max the largest sum of incident edge
    lengths, and (D*wdeg)_max the largest product of a vertex's star
    diameter with its weighted degree,

        lambda_i >= max(pi^2/(8 l_max^2),
                        pi^2/(2 wdeg_max^2),
                        1/(2 (D*wdeg)_max)) * alpha_i

    where alpha_i is the spectrum of the length-weighted reduced graph.
    The star diameter at a vertex is the sum of its two longest incident
    edge lengths, or twice the length if only one edge is incident.
    """
    if any(e.is_loop() for e in g.edges):
        raise LoopPresent("star bounds need a loopless graph; split loops first")
    if not is_connected(g):
        raise Disconnected("star bounds need a connected graph")

    l_max = max(float(e.length) for e in g.edges)
    wdeg = {v: float(g.weighted_degree(v)) for v in g.vertices}
    d_times_deg = {}
    for v in g.vertices:
        lengths = sorted((float(e.length) for e, _ in g.incident[v]), reverse=True)
        diam = lengths[0] + lengths[1] if len(lengths) >= 2 else 2.0 * lengths[0]
        d_times_deg[v] = diam * wdeg[v]
    wdeg_max = max(wdeg.values())
    dd_max = max(d_times_deg.values())

    candidates = {
        "longest_edge": PI2 / (8.0 * l_max**2),
        "weighted_degree": PI2 / (2.0 * wdeg_max**2),
        "diameter_degree": 1.0 / (2.0 * dd_max),
    }
    factor = max(candidates.values())

    reduced = underlying_weighted(g, weight="length")
    alpha = normalized_spectrum(reduced).values
    bounds = tuple(factor * _nonneg(a) for a in alpha)
    return BoundReport(
        method="stars",
        indices=tuple(range(1, len(alpha) + 1)),
        bounds=bounds,
        ingredients={
            "factor": factor,
            "factor_candidates": candidates,
            "longest_edge": l_max,
            "max_weighted_degree": wdeg_max,
            "max_diameter_times_degree": dd_max,
            "alpha": list(alpha),
        },
    )


def pumpkin_chain_bounds(spec: PumpkinChainSpec) -> BoundReport:
    """Spectral-gap bounds for a locally equilateral pumpkin chain.

    Two lower bounds and one comparison upper bound, all in terms of the
    pumpkin total lengths P_i = m_i * l_i and the longest single edge:

      diameter route   lambda_2 >= pi^2/(4 l_max^2) / (sum P_i * sum 1/P_i)
      harmonic route   lambda_2 >= 4 P_min P_max/(P_min+P_max)^2
                                     * pi^2/(4 n^2 l_max^2)
      upper (n >= 2)   lambda_2 <= (n+1)^2 pi^2 / (4 L^2)

    The harmonic route never beats the diameter route (mean inequality);
    this is asserted.
    """
    n = spec.n
    if n < 1:
        raise BadSpec("chain needs at least one pumpkin", n=n)
    p_lengths = [float(p) for p in spec.pumpkin_lengths]
    if any(p <= 0 for p in p_lengths):
        raise BadSpec("pumpkin total lengths must be positive")
    l_max = float(spec.max_edge_length)
    total = float(spec.total_length)

    sum_p = sum(p_lengths)
    sum_inv = sum(1.0 / p for p in p_lengths)
    diam_lower = PI2 / (4.0 * l_max**2) / (sum_p * sum_inv)

    p_min, p_max = min(p_lengths), max(p_lengths)
    harm_lower = (4.0 * p_min * p_max / (p_min + p_max) ** 2) * PI2 / (4.0 * n**2 * l_max**2)
    assert harm_lower <= diam_lower * (1 + 1e-12), (harm_lower, diam_lower)

    upper = {}
    if n >= 2:
        upper[2] = (n + 1) ** 2 * PI2 / (4.0 * total**2)

    return BoundReport(
        method="pumpkin_chain",
        indices=(2,),
        bounds=(diam_lower,),
        ingredients={
            "diameter_route": diam_lower,
            "harmonic_route": harm_lower,
            "pumpkin_lengths": p_lengths,
            "longest_edge": l_max,
            "total_length": total,
            "n": n,
        },
        upper_bounds=upper,
    )


@dataclass(frozen=True)
class FourPumpkinBounds:
    """Gap bounds for the 4-pumpkin with edge lengths (1, 1, a, a).

    Two cyclic pairings of the edges give two covers: ``grouped`` keeps the
    equal-length edges adjacent, ``alternating`` interleaves them.  The
    closed forms are pi^2/(2 a^2) and 4 pi^2/(a+1)^3; ``better`` records
    which wins ("grouped" exactly when a > 2+sqrt(5), "tie" within 1e-12).
    ``via_cover_*`` are the same numbers recomputed through the generic
    transference machinery on the explicitly built covers.
    """

    a: float
    bound_grouped: float
    bound_alternating: float
    better: str
    via_cover_grouped: float
    via_cover_alternating: float

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "bound_grouped": self.bound_grouped,
            "bound_alternating": self.bound_alternating,
            "better": self.better,
            "via_cover_grouped": self.via_cover_grouped,
            "via_cover_alternating": self.via_cover_alternating,
        }


def four_pumpkin_bounds(a: float) -> FourPumpkinBounds:
    """Closed-form cover bounds for pumpkin(4, [1, 1, a, a]), a >= 1."""
    from .covers import pumpkin_cycle_cover
    from .metric_graph import four_pumpkin

    a = float(a)
    if a < 1.0:
        raise BadParameter("edge length ratio must be >= 1", a=a)

    grouped = PI2 / (2.0 * a**2)
    alternating = 4.0 * PI2 / (a + 1.0) ** 3

    g = four_pumpkin(a)
    rep_g = transfer_bound(g, pumpkin_cycle_cover(g, ordering=("e0", "e1", "e3", "e2")), "exact_cycle")
    rep_a = transfer_bound(g, pumpkin_cycle_cover(g, ordering=("e0", "e2", "e1", "e3")), "exact_cycle")

    scale = max(grouped, alternating)
    if abs(grouped - alternating) <= 1e-12 * scale:
        better = "tie"
    elif grouped > alternating:
        better = "grouped"
    else:
        better = "alternating"
    return FourPumpkinBounds(
        a=a,
        bound_grouped=grouped,
        bound_alternating=alternating,
        better=better,
        via_cover_grouped=rep_g.bound(2),
        via_cover_alternating=rep_a.bound(2),
    )


# ---------------------------------------------------------------------------
# classical comparison bounds
# ---------------------------------------------------------------------------


def classical_bounds(g: MetricGraph, k_max: int = 2) -> list[BoundReport]:
    """Whole-graph comparison bounds that need no cover.

    Reports, as separate entries:

      * ``friedlander``: lambda_k >= pi^2 k^2 / (4 L^2) for k = 2..k_max;
      * ``nicaise``: pi^2/L^2 <= lambda_2 <= pi^2 E^2 / L^2;
      * ``band_levy``: lambda_2 >= 4 pi^2/L^2, only for doubly
        (2-edge-)connected graphs, silently omitted otherwise;
      * ``kennedy_style``: lambda_2 >= 1/(diam * L) with the metric
        diameter; the exact constant is a reconstruction, so the entry is
        flagged.
    """
    if not is_connected(g):
        raise Disconnected("comparison bounds need a connected graph")
    if k_max < 2:
        raise BadParameter("k_max must be at least 2", k_max=k_max)
    total = float(g.total_length)
    n_edges = len(g.edges)

    reports = [
        BoundReport(
            method="friedlander",
            indices=tuple(range(2, k_max + 1)),
            bounds=tuple(PI2 * k**2 / (4.0 * total**2) for k in range(2, k_max + 1)),
            ingredients={"total_length": total},
        ),
        BoundReport(
            method="nicaise",
            indices=(2,),
            bounds=(PI2 / total**2,),
            ingredients={"total_length": total, "edge_count": n_edges},
            upper_bounds={2: PI2 * n_edges**2 / total**2},
        ),
    ]
    if is_doubly_connected(g):
        reports.append(
            BoundReport(
                method="band_levy",
                indices=(2,),
                bounds=(4.0 * PI2 / total**2,),
                ingredients={"total_length": total},
            )
        )
    diam = float(metric_diameter(g))
    reports.append(
        BoundReport(
            method="kennedy_style",
            indices=(2,),
            bounds=(1.0 / (diam * total),),
            ingredients={"total_length": total, "metric_diameter": diam},
            flags=("reconstructed",),
        )
    )
    return reports


def require_doubly_connected(g: MetricGraph) -> None:
    """Raise NotDoublyConnected unless g is 2-edge-connected."""
    if not is_doubly_connected(g):
        raise NotDoublyConnected("graph has a bridge")


# ---------------------------------------------------------------------------
# the comparison table
# ---------------------------------------------------------------------------

CSV_COLUMNS = ("method", "index", "bound", "oracle", "ratio", "ingredients")


@dataclass(frozen=True)
class CompareRow:
    method: str
    index: int
    bound: float
    oracle: float | None
    ratio: float | None
    ingredients: str


@dataclass(frozen=True)
class CompareTable:
    rows: tuple[CompareRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow([r.method, r.index, _fmt(r.bound),
                             _fmt(r.oracle), _fmt(r.ratio), r.ingredients])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "method": r.method,
                    "index": r.index,
                    "bound": r.bound,
                    "oracle": r.oracle,
                    "ratio": r.ratio,
                    "ingredients": r.ingredients,
                }
                for r in self.rows
            ]
        }


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(x)


def _ingredient_summary(report: BoundReport) -> str:
    parts = []
    ing = report.ingredients
    for key in ("fold", "eta", "eta_strategy", "factor", "total_length", "metric_diameter"):
        if key in ing:
            val = ing[key]
            parts.append(f"{key}={val:.6g}" if isinstance(val, float) else f"{key}={val}")
    for flag in report.flags:
        parts.append(f"flag:{flag}")
    return ";".join(parts)


def tabulate(
    g: MetricGraph, reports: Sequence[BoundReport], *, with_oracle: bool = True
) -> CompareTable:
    """Turn reports into (method, index) rows with oracle column and ratio."""
    needed = max((max(r.indices, default=1) for r in reports), default=2)
    oracle_values: Sequence[float] | None = None
    if with_oracle:
        from . import oracle

        try:
            oracle_values = oracle.spectrum(g, count=min(needed, 40)).values
        except Exception:
            oracle_values = None

    rows = []
    for rep in reports:
        summary = _ingredient_summary(rep)
        for idx, bnd in zip(rep.indices, rep.bounds):
            orc = None
            if oracle_values is not None and idx - 1 < len(oracle_values):
                orc = oracle_values[idx - 1]
            ratio = bnd / orc if orc is not None and orc > 1e-14 else None
            rows.append(CompareRow(rep.method, idx, bnd, orc, ratio, summary))
    rows.sort(key=lambda r: (r.method, r.index))
    return CompareTable(tuple(rows))


def compare_report(
    g: MetricGraph,
    cover_specs: Sequence[str | tuple[str, Cover]],
    eta_specs: str | Mapping[str, str] = "exact_cycle",
    k_max: int = 2,
    *,
    with_oracle: bool = True,
) -> CompareTable:
    """One row per (method, index): bound, oracle value, tightness ratio.

    ``cover_specs`` entries are either a strategy name understood by
    :func:`covers.build_cover` (with ``"stars"`` routed to the specialized
    :func:`star_bound`) or a ``(label, Cover)`` pair.  ``eta_specs`` is a
    single strategy name or a mapping from cover label to strategy.
    Classical comparison bounds are always appended.  Rows are ordered by
    method name, then index.
    """
    reports: list[BoundReport] = []
    for spec in cover_specs:
        if isinstance(spec, str) and spec == "stars":
            reports.append(star_bound(g))
            continue
        if isinstance(spec, str):
            label, cover = spec, build_cover(g, spec)
        else:
            label, cover = spec
        eta = eta_specs if isinstance(eta_specs, str) else eta_specs[label]
        reports.append(transfer_bound(g, cover, eta))
    reports.extend(classical_bounds(g, k_max=k_max))
    return tabulate(g, reports, with_oracle=with_oracle)
