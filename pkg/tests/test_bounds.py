"""Lower-bound machinery: transference, stars, chains, and comparisons.

Closed-form targets used here are worked out by hand from the cover data:
fold m, element gap eta, and the overlap graph's normalized spectrum.
"""

from __future__ import annotations

import math

import pytest

from qgbounds import bounds, covers, oracle
from qgbounds import metric_graph as mg
from qgbounds.errors import (
    BadParameter,
    BadSpec,
    Disconnected,
    EtaUnavailable,
    LoopPresent,
    NotDoublyConnected,
)

from conftest import corpus_graph, corpus_oracle

PI2 = math.pi ** 2
SQ5 = math.sqrt(5)


# ---------------------------------------------------------------------------
# transference closed forms


def test_tetrahedron_face_cover_bound():
    g = corpus_graph("tetrahedron")
    rep = bounds.transfer_bound(g, covers.face_cover(g), "exact_cycle")
    assert rep.ingredients["fold"] == 2
    assert rep.ingredients["eta"] == pytest.approx(4 * PI2 / 9, abs=1e-12)
    assert rep.bound(2) == pytest.approx(8 * PI2 / 27, abs=1e-9)
    assert rep.bound(1) == 0.0


def test_tetrahedron_diamond_cover_bound():
    g = corpus_graph("tetrahedron")
    rep = bounds.transfer_bound(g, covers.face_pair_cover(g), "exact_cycle")
    assert rep.ingredients["eta"] == pytest.approx(PI2 / 4, abs=1e-12)
    assert rep.bound(2) == pytest.approx(3 * PI2 / 16, abs=1e-9)


def test_icosahedron_face_cover_bound():
    g = corpus_graph("icosahedron")
    rep = bounds.transfer_bound(g, covers.face_cover(g), "exact_cycle")
    # twenty faces overlap like the dodecahedral graph
    assert rep.ingredients["alpha"][1] == pytest.approx((3 - SQ5) / 3, abs=1e-9)
    assert rep.bound(2) == pytest.approx(2 * PI2 * (3 - SQ5) / 27, abs=1e-9)


def test_cube_sixfold_cover_bound():
    g = corpus_graph("cube")
    rep = bounds.transfer_bound(g, covers.face_pair_cover(g), "exact_cycle")
    assert rep.ingredients["fold"] == 6
    assert rep.ingredients["eta"] == pytest.approx(PI2 / 9, abs=1e-12)
    assert rep.bound(2) == pytest.approx(8 * PI2 / 81, abs=1e-9)
    grouped = {round(v, 9): m for v, m in
               bounds.normalized_spectrum(
                   covers.vicinity_graph(g, covers.face_pair_cover(g))).grouped()}
    assert grouped == {0.0: 1, round(16 / 15, 9): 9, round(6 / 5, 9): 2}


def test_index_limit_truncates():
    g = corpus_graph("cube")
    rep = bounds.transfer_bound(g, covers.face_cover(g), "exact_cycle",
                                index_limit=3)
    assert rep.indices == (1, 2, 3)


# ---------------------------------------------------------------------------
# eta strategies


def test_nicaise_eta_is_a_quarter_of_the_cycle_eta():
    g = corpus_graph("tetrahedron")
    cover = covers.face_cover(g)
    exact = bounds.transfer_bound(g, cover, "exact_cycle")
    quarter = bounds.transfer_bound(g, cover, "nicaise")
    assert quarter.ingredients["eta"] == pytest.approx(
        exact.ingredients["eta"] / 4, abs=1e-12)
    assert quarter.bound(2) == pytest.approx(exact.bound(2) / 4, abs=1e-9)


def test_oracle_eta_matches_exact_on_cycles_and_is_flagged():
    g = corpus_graph("tetrahedron")
    cover = covers.face_cover(g)
    exact = bounds.transfer_bound(g, cover, "exact_cycle")
    assisted = bounds.transfer_bound(g, cover, "oracle")
    assert "numerically_assisted" in assisted.flags
    assert "numerically_assisted" not in exact.flags
    assert assisted.ingredients["eta"] == pytest.approx(
        exact.ingredients["eta"], abs=1e-6)


def test_eta_strategies_reject_wrong_shapes():
    g = corpus_graph("tetrahedron")
    stars = covers.star_cover(g)
    with pytest.raises(EtaUnavailable) as exc:
        bounds.transfer_bound(g, stars, "exact_cycle")
    assert exc.value.context["element"].startswith("star:")
    with pytest.raises(EtaUnavailable):
        bounds.transfer_bound(g, stars, "doubly_connected")
    with pytest.raises(BadParameter):
        bounds.transfer_bound(g, stars, "bogus")
    # star_best works on star elements and keeps the transference sound
    rep = bounds.transfer_bound(g, stars, "star_best")
    lam2 = corpus_oracle("tetrahedron").gap
    assert 0 < rep.bound(2) <= lam2 + 1e-9


def test_star_gap_bound_tight_on_equilateral_star():
    star = mg.star_graph([1, 1, 1])
    eta = bounds.star_gap_bound(star)
    assert eta == pytest.approx(PI2 / 4, abs=1e-12)
    assert eta == pytest.approx(oracle.spectrum(star, 2).gap, abs=1e-9)
    with pytest.raises(EtaUnavailable):
        bounds.star_gap_bound(corpus_graph("tetrahedron"))


def test_disconnected_vicinity_is_flagged_not_fatal():
    g = corpus_graph("chain_324")
    rep = bounds.transfer_bound(g, covers.pumpkin_cycle_cover(g),
                                "exact_cycle")
    assert "disconnected_vicinity" in rep.flags
    assert rep.bound(2) == 0.0


# ---------------------------------------------------------------------------
# vertex-star bound


def test_star_bound_on_tetrahedron():
    rep = bounds.star_bound(corpus_graph("tetrahedron"))
    cands = rep.ingredients["factor_candidates"]
    assert cands["longest_edge"] == pytest.approx(PI2 / 8, abs=1e-12)
    assert cands["weighted_degree"] == pytest.approx(PI2 / 18, abs=1e-12)
    assert cands["diameter_degree"] == pytest.approx(1 / 12, abs=1e-12)
    assert rep.ingredients["factor"] == pytest.approx(PI2 / 8, abs=1e-12)
    assert rep.bound(2) == pytest.approx(PI2 / 6, abs=1e-9)


def test_star_bound_on_icosahedron():
    rep = bounds.star_bound(corpus_graph("icosahedron"))
    assert rep.bound(2) == pytest.approx(PI2 * (5 - SQ5) / 40, abs=1e-9)


def test_star_bound_rejects():
    loopy = mg.MetricGraph(
        ("a", "b"),
        (mg.Edge("e0", "a", "b", 1), mg.Edge("e1", "b", "b", 1)), None)
    with pytest.raises(LoopPresent):
        bounds.star_bound(loopy)
    split = mg.MetricGraph(
        ("a", "b", "c", "d"),
        (mg.Edge("e0", "a", "b", 1), mg.Edge("e1", "c", "d", 1)), None)
    with pytest.raises(Disconnected):
        bounds.star_bound(split)


# ---------------------------------------------------------------------------
# pumpkin chains


def test_chain_bounds_unit_324():
    spec = mg.chain_spec_of(corpus_graph("chain_324"))
    rep = bounds.pumpkin_chain_bounds(spec)
    assert rep.bound(2) == pytest.approx(PI2 / 39, abs=1e-12)
    assert rep.ingredients["harmonic_route"] == pytest.approx(
        2 * PI2 / 81, abs=1e-12)
    assert rep.ingredients["harmonic_route"] <= rep.bound(2)
    assert rep.upper_bounds[2] == pytest.approx(4 * PI2 / 81, abs=1e-12)


def test_chain_bounds_unit_222_collapse_to_equality():
    spec = mg.chain_spec_of(corpus_graph("chain_222"))
    rep = bounds.pumpkin_chain_bounds(spec)
    assert rep.bound(2) == pytest.approx(PI2 / 36, abs=1e-12)
    assert rep.ingredients["harmonic_route"] == pytest.approx(
        rep.bound(2), abs=1e-12)
    # the comparison upper bound is attained on this chain
    lam2 = corpus_oracle("chain_222").gap
    assert rep.upper_bounds[2] == pytest.approx(lam2, abs=1e-9)
    assert rep.upper_bounds[2] == pytest.approx(PI2 / 9, abs=1e-12)


def test_chain_bounds_single_pumpkin_has_no_upper():
    rep = bounds.pumpkin_chain_bounds(mg.PumpkinChainSpec.create((3,)))
    assert rep.upper_bounds == {}
    assert rep.bound(2) == pytest.approx(PI2 / 4, abs=1e-12)


# ---------------------------------------------------------------------------
# the 4-pumpkin family


@pytest.mark.parametrize("a, better", [
    (1.0, "tie"),
    (2.0, "alternating"),
    (2 + SQ5, "tie"),
    (5.0, "grouped"),
    (10.0, "grouped"),
])
def test_four_pumpkin_closed_forms(a, better):
    fp = bounds.four_pumpkin_bounds(a)
    assert fp.better == better
    assert fp.bound_grouped == pytest.approx(PI2 / (2 * a * a), abs=1e-12)
    assert fp.bound_alternating == pytest.approx(
        4 * PI2 / (a + 1) ** 3, abs=1e-12)
    assert fp.via_cover_grouped == pytest.approx(fp.bound_grouped, abs=1e-9)
    assert fp.via_cover_alternating == pytest.approx(
        fp.bound_alternating, abs=1e-9)


def test_four_pumpkin_rejects_short_ratio():
    with pytest.raises(BadParameter):
        bounds.four_pumpkin_bounds(0.5)


# ---------------------------------------------------------------------------
# classical comparisons


def test_classical_bounds_on_icosahedron():
    reps = {r.method: r for r in
            bounds.classical_bounds(corpus_graph("icosahedron"), k_max=3)}
    assert set(reps) == {"friedlander", "nicaise", "band_levy", "kennedy_style"}
    assert reps["friedlander"].bound(2) == pytest.approx(PI2 / 900, abs=1e-12)
    assert reps["friedlander"].bound(3) == pytest.approx(PI2 / 400, abs=1e-12)
    assert reps["nicaise"].bound(2) == pytest.approx(PI2 / 900, abs=1e-12)
    assert reps["nicaise"].upper_bounds[2] == pytest.approx(PI2, abs=1e-12)
    assert reps["band_levy"].bound(2) == pytest.approx(PI2 / 225, abs=1e-12)
    assert reps["kennedy_style"].bound(2) == pytest.approx(1 / 90, abs=1e-12)
    assert "reconstructed" in reps["kennedy_style"].flags


def test_classical_bounds_drop_band_levy_on_bridges():
    methods = {r.method for r in bounds.classical_bounds(mg.path_graph(1))}
    assert "band_levy" not in methods
    assert {"friedlander", "nicaise", "kennedy_style"} <= methods
    with pytest.raises(BadParameter):
        bounds.classical_bounds(mg.path_graph(1), k_max=1)
    with pytest.raises(NotDoublyConnected):
        bounds.require_doubly_connected(mg.path_graph(1))
    bounds.require_doubly_connected(mg.pumpkin(2))


# ---------------------------------------------------------------------------
# report plumbing


def test_bound_report_validation():
    with pytest.raises(BadSpec):
        bounds.BoundReport("x", (1, 2), (0.0,), {})
    with pytest.raises(BadSpec):
        bounds.BoundReport("x", (1, 2), (2.0, 1.0), {})
    rep = bounds.BoundReport("x", (2,), (1.0,), {})
    with pytest.raises(BadParameter):
        rep.bound(3)


def test_compare_report_table():
    g = corpus_graph("tetrahedron")
    table = bounds.compare_report(g, ["faces", "stars"], "exact_cycle")
    csv = table.to_csv()
    assert csv.splitlines()[0] == ",".join(bounds.CSV_COLUMNS)
    methods = {r.method for r in table.rows}
    assert {"transfer[faces,exact_cycle]", "stars", "friedlander",
            "nicaise", "band_levy", "kennedy_style"} <= methods
    for row in table.rows:
        if row.ratio is not None:
            assert row.ratio <= 1 + 1e-9  # all these bounds are sound
    data = table.to_json()
    assert len(data["rows"]) == len(table.rows)


def test_compare_report_custom_cover_and_no_oracle():
    g = corpus_graph("tetrahedron")
    cover = covers.face_pair_cover(g)
    table = bounds.compare_report(
        g, [("diamonds", cover)], {"diamonds": "exact_cycle"},
        with_oracle=False)
    assert all(r.oracle is None and r.ratio is None for r in table.rows)
    assert any(r.method == "transfer[face_pairs,exact_cycle]" for r in table.rows)
