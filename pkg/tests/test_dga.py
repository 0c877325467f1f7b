import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_rank
from strategies import free_dgas
from sullivan.dga import (
    DGAError,
    FiniteDGA,
    FreeDGA,
    FreeMorphism,
    LinearMorphism,
    NotSimplyConnected,
    betti_numbers,
    cohomology,
    induced_map_on_cohomology,
    require_simply_connected,
    validate_dga,
)
from sullivan.graded_algebra import FreeGradedAlgebra, add_into, mul_terms
from sullivan.spaces import IntersectionForm, four_manifold, projective, sphere

XY = FreeGradedAlgebra.from_degrees({"x": 2, "y": 3})


def s2_model():
    return FreeDGA(XY, {"y": "x^2"})


def test_valid_free_example():
    rep = validate_dga(s2_model())
    assert rep.ok and rep.violations == []


def test_invalid_free_example_names_y():
    rep = validate_dga(FreeDGA(XY, {"y": "x^2", "x": "y"}))
    assert not rep.ok
    squares = [v.witness for v in rep.violations if v.kind == "d_squared"]
    assert "y" in squares
    with pytest.raises(DGAError):
        rep.raise_if_invalid()


def test_zero_differential_finite_is_valid():
    assert validate_dga(four_manifold(IntersectionForm.diag(1, -1, 2))).ok


def test_finite_violations_reported():
    bad_odd = FiniteDGA([("1", 0), ("a", 3), ("b", 6)], {(1, 1): {2: 1}})
    assert any(v.kind == "commutative" for v in validate_dga(bad_odd).violations)
    bad_comm = FiniteDGA([("1", 0), ("a", 2), ("b", 2), ("c", 4)],
                         {(1, 2): {3: 1}, (2, 1): {3: 2}})
    assert validate_dga(bad_comm).first.kind == "commutative"
    bad_leibniz = FiniteDGA([("1", 0), ("x", 2), ("y", 3), ("z", 4)],
                            {(1, 1): {3: 1}}, {2: {3: 1}, 1: {}})
    assert validate_dga(bad_leibniz).ok  # dy = x², consistent
    broken = FiniteDGA([("1", 0), ("x", 2), ("y", 3), ("z", 4)], {}, {2: {3: 1}, 1: {2: 1}})
    kinds = {v.kind for v in validate_dga(broken).violations}
    assert "d_squared" in kinds


def test_cohomology_examples():
    dga = FreeDGA(XY, {"y": "x^2"}, truncation=10)
    h2 = cohomology(dga, 2)
    assert h2.dimension == 1
    assert dga.from_vector(2, h2.representatives[0]) == XY.gen("x")
    assert cohomology(dga, 4).dimension == 0
    assert cohomology(dga, 0).dimension == 1
    with pytest.raises(ValueError):
        cohomology(dga, 11)


def test_finite_with_differential():
    A = FiniteDGA([("1", 0), ("x", 2), ("y", 3), ("x2", 4)], {(1, 1): {3: 1}}, {2: {3: 1}})
    assert validate_dga(A).ok
    assert betti_numbers(A, 4) == [1, 0, 1, 0, 0]


def test_zero_differential_cohomology_is_algebra():
    A = projective(4)
    for k in range(10):
        assert cohomology(A, k).dimension == A.dim(k)


def test_simply_connected_gate():
    require_simply_connected(sphere(2))
    circle = FiniteDGA([("1", 0), ("t", 1)])
    with pytest.raises(NotSimplyConnected):
        require_simply_connected(circle)


def test_induced_identity():
    A = four_manifold(IntersectionForm.diag(1, 1, 1))
    ind = induced_map_on_cohomology(LinearMorphism.identity(A), 2)
    assert ind.rank == 3 and ind.is_isomorphism
    assert ind.matrix == [[1 if i == j else 0 for j in range(3)] for i in range(3)]


def test_induced_s2_model_map():
    S2 = sphere(2)
    f = FreeMorphism(FreeDGA(XY, {"y": "x^2"}, truncation=6), S2, {0: {1: 1}})
    ind = induced_map_on_cohomology(f, 2)
    assert ind.rank == 1 and ind.is_isomorphism


def test_induced_zero_map():
    f = FreeMorphism(FreeDGA(XY, {"y": "x^2"}, truncation=6), sphere(2), {})
    assert induced_map_on_cohomology(f, 2).rank == 0


def test_non_chain_map_names_generator():
    f = FreeMorphism(FreeDGA(XY, {"y": "x^2"}, truncation=6), projective(2), {0: {1: 1}})
    with pytest.raises(DGAError, match="y"):
        induced_map_on_cohomology(f, 2)


def test_json_round_trip(tmp_path):
    A = four_manifold(IntersectionForm.of([[0, 1], [1, 0]]), name="S2xS2")
    doc = A.to_json()
    path = tmp_path / "a.json"
    path.write_text(json.dumps(doc))
    B = FiniteDGA.load(path)
    assert B.same_structure(A)
    assert B.name == "S2xS2"


def test_json_hand_written():
    doc = {"name": "CP2", "basis": [{"name": "1", "degree": 0}, {"name": "u", "degree": 2},
                                    {"name": "w", "degree": 4}],
           "products": {"u*u": "w"}}
    assert FiniteDGA.from_json(doc).same_structure(projective(2))


# ---------------------------------------------- properties on generated DGAs

@settings(max_examples=1000)
@given(st.data())
def test_d_squared_vanishes(data):
    dga = data.draw(free_dgas())
    alg = dga.algebra
    for _ in range(3):
        k = data.draw(st.integers(0, 10))
        basis = alg.monomial_basis(k)
        if basis:
            m = data.draw(st.sampled_from(basis))
            assert dga.d_terms(dga.d_mono(m)) == {}


@settings(max_examples=1000)
@given(st.data())
def test_leibniz(data):
    dga = data.draw(free_dgas())
    alg = dga.algebra
    pool = [m for k in range(9) for m in alg.monomial_basis(k)]
    a = data.draw(st.sampled_from(pool))
    b = data.draw(st.sampled_from(pool))
    one = Fraction(1)
    lhs = dga.d_terms(mul_terms(alg, {a: one}, {b: one}))
    rhs = mul_terms(alg, dga.d_mono(a), {b: one})
    add_into(rhs, mul_terms(alg, {a: one}, dga.d_mono(b)), -1 if alg.mono_degree(a) % 2 else 1)
    assert lhs == rhs


@settings(max_examples=200)
@given(free_dgas(top=5), st.integers(2, 7))
def test_euler_poincare(dga, K):
    dga.truncation = None
    chain = sum((-1) ** k * dga.dim(k) for k in range(K + 1))
    homology = sum((-1) ** k * cohomology(dga, k).dimension for k in range(K + 1))
    cols = dga.columns(K)
    n = dga.dim(K + 1)
    rows = [[col.get(i, 0) for col in cols] for i in range(n)] if cols else []
    assert chain - homology == (-1) ** K * dense_rank(rows)


@settings(max_examples=200)
@given(free_dgas(top=5))
def test_generated_dgas_validate(dga):
    assert validate_dga(dga, samples=20).ok
