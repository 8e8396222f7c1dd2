"""Shared fixtures: the graph corpus and a cached spectral oracle."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from qgbounds import metric_graph as mg
from qgbounds import oracle

PLATONIC_NAMES = ("tetrahedron", "cube", "octahedron", "dodecahedron",
                  "icosahedron")

# name -> zero-argument builder.  Platonics, pumpkin chains with
# multiplicities in {2,3,4} and rational lengths, and 4-pumpkins across the
# crossover (including one irrational side length).
CORPUS = {
    **{name: (lambda n=name: mg.platonic(n)) for name in PLATONIC_NAMES},
    "chain_324": lambda: mg.pumpkin_chain((3, 2, 4)),
    "chain_342": lambda: mg.pumpkin_chain((3, 4, 2)),
    "chain_222": lambda: mg.pumpkin_chain((2, 2, 2)),
    "chain_234_mixed": lambda: mg.pumpkin_chain(
        (2, 3, 4), [Fraction(1, 2), 1, Fraction(3, 2)]),
    "chain_432_mixed": lambda: mg.pumpkin_chain(
        (4, 3, 2), [2, Fraction(2, 3), Fraction(5, 4)]),
    "four_pumpkin_1": lambda: mg.four_pumpkin(1),
    "four_pumpkin_2": lambda: mg.four_pumpkin(2),
    "four_pumpkin_golden": lambda: mg.four_pumpkin(2 + math.sqrt(5)),
    "four_pumpkin_5": lambda: mg.four_pumpkin(5),
    "four_pumpkin_10": lambda: mg.four_pumpkin(10),
}

CHAIN_NAMES = tuple(n for n in CORPUS if n.startswith("chain_"))
PUMPKIN_NAMES = tuple(n for n in CORPUS if n.startswith("four_pumpkin"))

_graphs: dict = {}
_spectra: dict = {}


def corpus_graph(name: str) -> mg.MetricGraph:
    if name not in _graphs:
        _graphs[name] = CORPUS[name]()
    return _graphs[name]


def corpus_oracle(name: str, count: int = 6) -> oracle.SpectrumResult:
    """Reference spectrum for a corpus graph, cached across tests.

    Rational graphs take the exact route; the irrational 4-pumpkin gets a
    fine finite-element mesh so its values are still good to ~1e-7."""
    cached = _spectra.get(name)
    if cached is not None and len(cached) >= count:
        return oracle.SpectrumResult(cached.values[:count], cached.method,
                                     cached.meta)
    g = corpus_graph(name)
    if all(isinstance(e.length, Fraction) for e in g.edges):
        res = oracle.spectrum(g, count=count)
    else:
        res = oracle.spectrum(g, count=count, mesh=0.02)
    _spectra[name] = res
    return res


@pytest.fixture(scope="session")
def graph_of():
    return corpus_graph


@pytest.fixture(scope="session")
def oracle_of():
    return corpus_oracle
