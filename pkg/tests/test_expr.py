import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpalg.algebra import KPAlgebra
from kpalg.expr import ExprSyntaxError, format_element, parse_element
from kpalg.kgraph import PathError
from kpalg.ring import Fp, Q, RingError, Z

from conftest import FIXTURES
from oracles import random_element


def test_parse_simple_terms(algebras):
    c2 = algebras["C2"]
    assert parse_element(c2, "p(u)") == c2.p("u")
    assert parse_element(c2, "s(e.f)") == c2.s("e.f")
    assert parse_element(c2, "st(e)") == c2.st("e")
    assert parse_element(c2, "s(u)") == c2.p("u")
    assert parse_element(c2, "0").is_zero()
    assert parse_element(c2, " 2 * s( e ) * st( e ) - 1/2*p(u) ") == (
        c2.s("e").scale(2) * c2.st("e") - c2.p("u").scale(Fraction(1, 2))
    )
    assert parse_element(c2, "-p(u) + p(v)") == c2.p("v") - c2.p("u")


def test_parse_canonicalizes_paths(algebras):
    n2 = algebras["N2"]
    assert parse_element(n2, "s(f.e)") == n2.s("e.f")


def test_format_examples(algebras):
    n1, c2 = algebras["N1"], algebras["C2"]
    assert format_element(n1.st("f") * n1.s("f")) == "1*p(star)"
    assert format_element(c2.zero()) == "0"
    assert format_element(c2.s("e") - c2.s("f").scale(3)) == "1*s(e) - 3*s(f)"
    # mixed ghost degrees are printed at their join: s(e) = s(e.f)*st(f)
    assert format_element(c2.s("e") - c2.st("e").scale(3)) == "-3*st(e) + 1*s(e.f)*st(f)"
    # u receives only e, and e's source only f, so this collapses to p(u)
    assert format_element(c2.s("e.f") * c2.st("e.f")) == "1*p(u)"
    assert format_element(c2.s("e.f") * c2.st("e.f"), compact=False) == "1*s(e.f)*st(e.f)"


def test_syntax_errors_cite_column(algebras):
    c2 = algebras["C2"]
    cases = {"p(u) + ": 8, "q(u)": 1, "p(u": 4, "p(u) $ p(v)": 6, "2 s(e)": 1, "1/x*p(u)": 3}
    for text, col in cases.items():
        with pytest.raises(ExprSyntaxError) as exc:
            parse_element(c2, text)
        assert exc.value.column == col, text


def test_domain_errors(algebras):
    c2 = algebras["C2"]
    with pytest.raises(PathError):
        parse_element(c2, "s(e.e)")
    with pytest.raises(PathError):
        parse_element(c2, "p(w)")
    with pytest.raises(RingError):
        parse_element(KPAlgebra(c2.graph, Z), "1/2*p(u)")


def test_ring_interpreted_coefficients(graphs):
    f3 = KPAlgebra(graphs["C2"], Fp(3))
    assert parse_element(f3, "3*p(u)").is_zero()
    assert format_element(parse_element(f3, "1/2*p(u)")) == "2*p(u)"


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIXTURES), st.sampled_from([Q, Z, Fp(5)]), st.integers(0, 2**32 - 1))
def test_round_trip(graphs, name, ring, seed):
    alg = KPAlgebra(graphs[name], ring)
    x = random_element(alg, random.Random(seed), (2,) * alg.graph.k if alg.graph.k == 1 else (1, 1))
    for compact in (True, False):
        text = format_element(x, compact=compact)
        assert parse_element(alg, text) == x
    assert format_element(parse_element(alg, format_element(x))) == format_element(x)
