from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import brute_monomials, series_counts
from sullivan.graded_algebra import (
    Element,
    FreeGradedAlgebra,
    Generator,
    basis_counts,
    monomial_basis,
    multiply,
)

XY = FreeGradedAlgebra.from_degrees({"x": 2, "y": 3})
MIXED = FreeGradedAlgebra.from_degrees({"a": 2, "b": 2, "u": 3, "v": 3, "w": 5, "c": 4})


def test_basis_examples():
    assert [XY.format_monomial(m) for m in monomial_basis(XY, 5)] == ["x*y"]
    assert [XY.format_monomial(m) for m in monomial_basis(XY, 6)] == ["x^3"]
    assert monomial_basis(XY, 0) == ((),)
    assert monomial_basis(XY, 1) == ()


def test_odd_generator_squares_to_zero():
    y = XY.gen("y")
    assert (y * y).is_zero()


def test_koszul_signs():
    alg = FreeGradedAlgebra.from_degrees({"x": 2, "y": 3, "z": 5})
    x, y, z = alg.gen("x"), alg.gen("y"), alg.gen("z")
    assert y * x == x * y
    assert z * y == -(y * z)
    assert (y * z) * y == alg.zero()


def test_canonical_order_is_structural():
    a = MIXED.parse("a*u + 2*b*v")
    b = MIXED.parse("2*v*b + u*a")
    assert a == b
    assert a.terms == b.terms


def test_parse_format_round_trip():
    e = MIXED.parse("3/2*a^2*c - b*c*a + u*v*a")
    assert MIXED.parse(str(e)) == e


def test_inhomogeneous_rejected():
    with pytest.raises(ValueError):
        XY.parse("x + y")


def test_mixing_algebras_rejected():
    other = FreeGradedAlgebra.from_degrees({"x": 2, "y": 3})
    with pytest.raises(ValueError):
        XY.gen("x") * other.gen("x")


def test_duplicate_generators_rejected():
    with pytest.raises(ValueError):
        FreeGradedAlgebra([Generator(2, 0, "x"), Generator(3, 0, "y")])
    with pytest.raises(ValueError):
        FreeGradedAlgebra([Generator(2, 0, "x"), Generator(3, 1, "x")])


def test_extend_keeps_positions():
    big = XY.extend([Generator(3, 7, "z")])
    assert big.is_extension_of(XY)
    assert big.position("x") == XY.position("x")
    assert big.position("y") == XY.position("y")


@pytest.mark.parametrize("degrees", [(2, 3), (2, 2, 2), (3, 5), (2, 3, 4, 5), (2, 2, 3, 3, 3)])
def test_basis_matches_brute_enumeration(degrees):
    alg = FreeGradedAlgebra([Generator(d, i, f"g{i}") for i, d in enumerate(degrees)])
    for k in range(13):
        mine = {tuple(dict(m).get(p, 0) for p in range(len(degrees))) for m in alg.monomial_basis(k)}
        assert mine == set(brute_monomials(degrees, k))


@settings(max_examples=200)
@given(st.lists(st.integers(1, 6), min_size=0, max_size=5), st.integers(0, 14))
def test_basis_counts_generating_function(degrees, top):
    alg = FreeGradedAlgebra([Generator(d, i, f"g{i}") for i, d in enumerate(degrees)])
    expected = series_counts(degrees, top)
    assert basis_counts(degrees, top) == expected
    assert [len(alg.monomial_basis(k)) for k in range(top + 1)] == expected


# -------------------------------------------------- property suites (>= 10³)

def elements(alg: FreeGradedAlgebra, max_degree: int = 9):
    def build(k):
        basis = alg.monomial_basis(k)
        if not basis:
            return st.just(Element(alg, {}))
        return st.dictionaries(st.sampled_from(basis), st.integers(-4, 4).filter(bool),
                               max_size=4).map(lambda t: Element(alg, t))
    return st.integers(0, max_degree).flatmap(build)


def sign(a, b):
    if a.degree is None or b.degree is None:
        return 1
    return -1 if a.degree % 2 and b.degree % 2 else 1


@settings(max_examples=1000)
@given(elements(MIXED), elements(MIXED))
def test_graded_commutativity(a, b):
    assert multiply(a, b) == sign(a, b) * multiply(b, a)


@settings(max_examples=1000)
@given(elements(MIXED, 6), elements(MIXED, 6), elements(MIXED, 6))
def test_associativity(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@settings(max_examples=1000)
@given(elements(MIXED))
def test_odd_squares_vanish_and_unit(a):
    assert multiply(MIXED.one(), a) == a == multiply(a, MIXED.one())
    if a.degree is not None and a.degree % 2:
        assert multiply(a, a).is_zero()


@settings(max_examples=300)
@given(elements(MIXED), elements(MIXED), st.fractions(max_denominator=5))
def test_bilinearity(a, b, q):
    assume(a.degree == b.degree or a.is_zero() or b.is_zero())
    c = MIXED.gen("u")
    assert multiply(a + b, c) == multiply(a, c) + multiply(b, c)
    assert multiply(q * a, c) == q * multiply(a, c)
