import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpalg.algebra import KPAlgebra
from kpalg.analysis import (
    AnalysisError,
    AperiodicExact,
    NoPeriodicityUpToBound,
    PeriodicWitness,
    analyse,
    aperiodicity,
    components,
    eventually_periodic_cofinality_oracle,
    format_laurent,
    has_closed_path,
    has_witness,
    is_cofinal,
    is_commutative_graph,
    laurent_iso,
    laurent_mul,
    witness_search,
)
from kpalg.kgraph import Edge, KGraph, parse_graph
from kpalg.ring import Q

from oracles import composable_words, random_element, random_k1_graph


def _n1_with_tail():
    # N1 plus a vertex w with its own loop and an edge w -> star
    return KGraph(
        1,
        ["star", "w"],
        [Edge("f", 1, "star", "star"), Edge("g", 1, "w", "w"), Edge("h", 1, "star", "w")],
        [],
    )


def _brute_k1_periodic(graph, bound):
    """Some (v, m, n) with m != n <= bound has no witness among words of length max(m,n)+bound."""
    for v in graph.vertices:
        for m in range(bound + 1):
            for n in range(bound + 1):
                if m == n:
                    continue
                words = composable_words(graph, max(m, n) + bound, v)
                if not any(w[m : m + bound] != w[n : n + bound] for w in words):
                    return True
    return False


def _commutes_brute(graph):
    alg = KPAlgebra(graph, Q)
    gens = [g for _, g in alg.generators()]
    return all((x * y - y * x).is_zero() for x in gens for y in gens)


def test_closed_paths(graphs):
    assert has_closed_path(graphs["N1"])
    assert has_closed_path(graphs["C2"])
    assert not has_closed_path(graphs["acyclic"])


def test_cofinality_examples(graphs):
    for name in ("L2", "N1", "N2", "C2", "F2", "L3"):
        assert is_cofinal(graphs[name]), name
    assert not is_cofinal(graphs["D2"])
    assert not is_cofinal(_n1_with_tail())
    with pytest.raises(AnalysisError):
        is_cofinal(graphs["acyclic"])


def test_cofinality_oracle_examples(graphs):
    assert eventually_periodic_cofinality_oracle(graphs["D2"], 4) is False
    assert eventually_periodic_cofinality_oracle(graphs["L2"], 4) is True
    assert eventually_periodic_cofinality_oracle(graphs["C2"], 4) is True
    assert eventually_periodic_cofinality_oracle(_n1_with_tail(), 4) is False


def test_aperiodicity_examples(graphs):
    assert aperiodicity(graphs["L2"]) == AperiodicExact()
    assert witness_search(graphs["L2"], 3) == NoPeriodicityUpToBound(3)
    c2 = aperiodicity(graphs["C2"])
    assert c2 == PeriodicWitness("u", (2,), (0,), mode="exact")
    assert not has_witness(graphs["C2"], "u", (2,), (0,), 3)
    n2 = aperiodicity(graphs["N2"])
    assert isinstance(n2, PeriodicWitness) and n2.mode == "bounded" and n2.m != n2.n
    assert not has_witness(graphs["N2"], "star", (1, 0), (0, 1), 3)
    assert isinstance(aperiodicity(graphs["F2"]), NoPeriodicityUpToBound)
    assert isinstance(aperiodicity(graphs["N1"]), PeriodicWitness)


def test_witness_search_deterministic_across_threads(graphs):
    for name in ("F2", "N2"):
        assert witness_search(graphs[name], 2, threads=1) == witness_search(graphs[name], 2, threads=4)


def test_commutativity_examples(graphs):
    assert is_commutative_graph(graphs["N2"])
    assert is_commutative_graph(graphs["N1"])
    assert is_commutative_graph(graphs["D2"])
    assert not is_commutative_graph(graphs["L2"])
    assert not is_commutative_graph(graphs["C2"])
    l2 = KPAlgebra(graphs["L2"], Q)
    assert not (l2.s("a") * l2.s("b") - l2.s("b") * l2.s("a")).is_zero()


def test_components(graphs):
    assert components(graphs["D2"]) == [("star1",), ("star2",)]
    assert components(graphs["C2"]) == [("u", "v")]
    assert components(_n1_with_tail()) == [("star", "w")]


def test_laurent_examples(graphs):
    n1 = KPAlgebra(graphs["N1"], Q)
    iso = laurent_iso(graphs["N1"])
    assert iso.export(n1.s("f.f") + n1.p("star").scale(2)) == {"star": {(0,): 2, (2,): 1}}
    assert iso.export(n1.st("f")) == {"star": {(-1,): 1}}
    assert format_laurent(Q, {(0,): 2, (2,): 1}) == "x^2 + 2"
    assert format_laurent(Q, {(-1,): 1}) == "x^-1"
    assert format_laurent(Q, {(1, -1): Fraction(1, 2)}) == "1/2*x1*x2^-1"
    with pytest.raises(AnalysisError):
        laurent_iso(graphs["L2"])


def test_direct_sum_example(graphs):
    d2 = KPAlgebra(graphs["D2"], Q)
    assert (d2.s("f1") * d2.s("f2")).is_zero()


def test_property_report_lines(graphs):
    lines = analyse(graphs["C2"]).lines()
    assert lines == [
        "closed_path: true",
        "cofinal: true",
        "aperiodicity: periodic",
        "aperiodicity_mode: exact",
        "aperiodicity_bound: n/a",
        "periodic_witness: vertex=u m=2 n=0",
        "commutative_graph: false",
        "components: u,v",
    ]
    f2 = analyse(graphs["F2"], bound=2).lines()
    assert "aperiodicity_mode: bounded" in f2 and "aperiodicity_bound: 2" in f2


# --- random corpus -------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cofinality_agrees_with_oracle(seed):
    g = random_k1_graph(random.Random(seed))
    assert g.validate() == []
    assert is_cofinal(g) == eventually_periodic_cofinality_oracle(g, 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entrance_criterion_agrees_with_witness_searches(seed):
    g = random_k1_graph(random.Random(seed))
    exact = aperiodicity(g)
    for bound in (1, 2, 3):
        bounded = witness_search(g, bound)
        brute = _brute_k1_periodic(g, bound)
        assert isinstance(bounded, PeriodicWitness) == brute
        if isinstance(exact, AperiodicExact):
            assert bounded == NoPeriodicityUpToBound(bound)
    if isinstance(exact, PeriodicWitness):
        assert not has_witness(g, exact.vertex, exact.m, exact.n, 3)
        if exact.m[0] <= 3:
            assert isinstance(witness_search(g, 3), PeriodicWitness)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_commutativity_agrees_with_generator_brute_force(seed):
    g = random_k1_graph(random.Random(seed))
    assert is_commutative_graph(g) == _commutes_brute(g)


def test_commutativity_brute_force_on_fixtures(graphs):
    for name in ("N1", "N2", "L2", "C2", "D2", "F2"):
        assert is_commutative_graph(graphs[name]) == _commutes_brute(graphs[name]), name


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["N1", "N2", "D2"]), st.integers(0, 2**32 - 1))
def test_laurent_multiplicative_and_invertible(graphs, name, seed):
    g = graphs[name]
    alg = KPAlgebra(g, Q)
    iso = laurent_iso(g)
    rng = random.Random(seed)
    x, y = (random_element(alg, rng, (2,) * g.k if g.k == 1 else (1, 1)) for _ in range(2))
    px, py, pxy = iso.export(x.normalize()), iso.export(y.normalize()), iso.export((x * y).normalize())
    want = {}
    for v in set(px) & set(py):
        prod = laurent_mul(Q, px[v], py[v])
        if prod:
            want[v] = prod
    assert pxy == want
    assert iso.element(alg, px) == x


def test_laurent_on_parsed_commutative_graph():
    g = parse_graph("k 2\nvertex o\nedge e 1 o o\nedge f 2 o o\nsquare e f = f e\n")
    iso = laurent_iso(g)
    alg = KPAlgebra(g, Q)
    assert iso.export(alg.s("e") * alg.st("f")) == {"o": {(1, -1): 1}}
