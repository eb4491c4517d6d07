import itertools
from fractions import Fraction
from functools import reduce
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kpalg.ring import Fp, Matrix, Q, RingError, RingSpec, Z, hermite_rows, kernel, rank


def test_arithmetic_examples():
    assert Q(Fraction(1, 2)) + Q(Fraction(1, 3)) == Q(Fraction(5, 6))
    assert Fp(2)(1) + Fp(2)(1) == Fp(2)(0)
    assert Q.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert Fp(2).add(1, 1) == 0
    with pytest.raises(RingError, match="not a field"):
        Z.inv(2)
    with pytest.raises(ZeroDivisionError):
        Q.inv(Fraction(0))
    with pytest.raises(ZeroDivisionError):
        Fp(5).inv(0)
    assert Fp(7).inv(3) == 5
    assert Fp(7).coerce(-1) == 6


def test_ring_parsing():
    assert RingSpec.parse("Q") == Q
    assert RingSpec.parse("Z") == Z
    assert RingSpec.parse("Fp:3") == Fp(3)
    for bad in ("Fp:4", "Fp:x", "R", "Fp:"):
        with pytest.raises(ValueError):
            RingSpec.parse(bad)
    assert Q.parse_scalar("-3/6") == Fraction(-1, 2)
    assert Fp(5).parse_scalar("1/2") == 3
    with pytest.raises(RingError):
        Z.parse_scalar("1/2")
    assert Z.parse_scalar("4/2") == 2


def test_values_are_normalised():
    v = Q(Fraction(4, -6))
    assert v.value == Fraction(-2, 3) and v.value.denominator == 3
    assert Fp(3)(7).value == 1
    assert str(Q(Fraction(1, 2))) == "1/2"


def test_kernel_examples():
    assert kernel(Matrix(Q, [[0, 0], [0, 0]])) == [[1, 0], [0, 1]]
    assert kernel(Matrix(Fp(2), [[1, 1]])) == [[1, 1]]
    assert kernel(Matrix(Z, [[2, 4]])) == [[2, -1]]
    assert kernel(Matrix(Q, [[1, 2], [3, 4]])) == []
    # the kernel basis itself is returned in reduced echelon form
    assert kernel(Matrix(Q, [[1, 2, 3]])) == [[1, 0, Fraction(-1, 3)], [0, 1, Fraction(-2, 3)]]


def test_z_kernel_small_multiples_bruteforce():
    # every integer solution of 2a + 4b = 0 in a box is a multiple of (2, -1)
    (v,) = kernel(Matrix(Z, [[2, 4]]))
    for a, b in itertools.product(range(-8, 9), repeat=2):
        if 2 * a + 4 * b == 0:
            assert a % v[0] == 0 and (a // v[0]) * v[1] == b


def _is_zero(m, vec):
    return all(x == 0 for x in m.apply(vec))


small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=4, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.sampled_from([Q, Fp(2), Fp(3), Fp(5)]))
def test_field_kernel_properties(entries, spec):
    m = Matrix(spec, entries)
    basis = kernel(m)
    for vec in basis:
        assert _is_zero(m, vec)
    assert rank(m) + len(basis) == m.ncols
    # reduced echelon: leading entries equal 1 in distinct, increasing columns
    leads = [next(j for j, x in enumerate(v) if x != 0) for v in basis]
    assert leads == sorted(set(leads))
    assert all(basis[i][j] == 1 for i, j in enumerate(leads))
    assert kernel(m) == basis


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_q_kernel_against_sympy(entries):
    m = Matrix(Q, entries)
    ours = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in v] for v in kernel(m)])
    theirs = sympy.Matrix(entries).nullspace()
    assert len(kernel(m)) == len(theirs)
    if theirs:
        stacked = sympy.Matrix.vstack(ours, *[t.T for t in theirs])
        assert stacked.rank() == len(theirs)


def _minor_gcd(basis):
    r = len(basis)
    n = len(basis[0])
    mat = sympy.Matrix(basis)
    return reduce(gcd, (int(mat.extract(list(range(r)), list(cols)).det()) for cols in itertools.combinations(range(n), r)))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_integer_kernel_is_saturated_lattice(entries):
    m = Matrix(Z, entries)
    basis = kernel(m)
    nullity = len(sympy.Matrix(entries).nullspace())
    assert len(basis) == nullity
    for vec in basis:
        assert all(isinstance(x, int) for x in vec)
        assert _is_zero(m, vec)
        assert reduce(gcd, vec) == 1
        assert next(x for x in vec if x != 0) > 0
    if basis:
        # the integer span is all of (Q-kernel) ∩ Z^n iff the maximal minors are coprime
        assert _minor_gcd(basis) == 1


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=2, max_cols=3))
def test_integer_kernel_box_bruteforce(entries):
    m = Matrix(Z, entries)
    basis = kernel(m)
    solver = sympy.Matrix(basis).T if basis else None
    for x in itertools.product(range(-3, 4), repeat=m.ncols):
        if not any(x) or not _is_zero(m, x):
            continue
        assert solver is not None
        coords, params = solver.gauss_jordan_solve(sympy.Matrix(x))
        assert len(params) == 0
        assert all(c.is_integer for c in coords)


def test_hermite_rows_canonical():
    # two bases of the same lattice give the same normal form
    a = hermite_rows([[1, 1, 0], [0, 1, 1]])
    b = hermite_rows([[1, 2, 1], [0, -1, -1]])
    assert a == b


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        Matrix(Q, [[1, 2], [3]])
