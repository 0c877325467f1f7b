import itertools
import json

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import brute_les
from sullivan.dichotomy import CatBound
from sullivan.les_solver import (
    INF,
    ExactChain,
    GottliebBudget,
    HypothesisError,
    InfeasibleLES,
    LESInstance,
    blowup_scenario,
    isotropy_lower_bounds,
    solve_chain,
    solve_les,
    structure_group_ranks,
)
from sullivan.minimal_model import RankSequence

THREE_CP2 = RankSequence.of([0, 0, 3, 5, 5, 10, 24, 55, 120, 270, 640, 1524, 3600], 4)


def test_short_exact_sequence():
    sol = solve_chain(ExactChain([1, 3, None], closed_left=True, closed_right=True))
    assert (sol.dims[2].lo, sol.dims[2].hi) == (2, 2)
    assert sol.certified


def test_segment_with_zero_flanks():
    # B(5) -> E(0) -> F(?) -> B'(8) -> E'(0): F maps onto B', nothing comes in from E
    sol = solve_chain(ExactChain([5, 0, None, 8, 0], closed_left=False, closed_right=False))
    assert str(sol.dims[2]) == "[8, 8]"
    brute = brute_les([5, 0, None, 8, 0], {}, False, False, 10)
    assert {d[2] for d in brute} == {8}


def test_all_unknown_is_unbounded():
    sol = solve_les(LESInstance([None] * 3, [None] * 3, [None] * 3))
    for iv in sol.intervals.values():
        assert iv.lo == 0 and iv.unbounded and iv.hi == INF
        assert str(iv) == "[0, ∞]"
    assert sol.certified


def test_infeasible_reports_window():
    with pytest.raises(InfeasibleLES) as info:
        solve_chain(ExactChain([1, 0, 2], closed_left=True))
    assert info.value.window == (0, 1)


def test_zero_map_annotation():
    # B(3) is closed on the left, so it must inject; a zero map out of it is infeasible
    with pytest.raises(InfeasibleLES):
        solve_les(LESInstance([3], [None], [None], zero_maps=[("B->E", 1)]))
    inst = LESInstance([None, 4], [2, None], [None, None], zero_maps=[("F->B", 1)])
    sol = solve_les(inst)
    assert sol.intervals[("B", 1)].hi == 2
    assert str(sol.intervals[("F", 1)]) == "[0, 2]"  # only the image of E¹ lands there


def test_from_json():
    doc = {"B": [5, 8], "E": [0, 0], "F": ["?", None],
           "zero_maps": [{"map": "E->F", "degree": 1}],
           "rank_caps": [{"map": "B->E", "degree": 2, "cap": 0}]}
    inst = LESInstance.from_json(json.loads(json.dumps(doc)))
    assert inst.N == 2
    assert inst.rank_caps == {("B->E", 2): 0}


def test_bad_annotation_rejected():
    with pytest.raises(ValueError):
        LESInstance([1], [1], [1], zero_maps=[("X->Y", 1)])
    with pytest.raises(ValueError):
        LESInstance([1], [1], [1], zero_maps=[("B->E", 2)])


# --------------------------------------------------- brute-force comparisons

@st.composite
def small_chains(draw):
    n = draw(st.integers(1, 5))
    dims = draw(st.lists(st.one_of(st.none(), st.integers(0, 3)), min_size=n, max_size=n))
    caps = draw(st.dictionaries(st.integers(0, n - 1), st.integers(0, 2), max_size=2))
    return ExactChain(dims, caps, draw(st.booleans()), draw(st.booleans()))


@settings(max_examples=400)
@given(small_chains())
def test_intervals_match_enumeration(chain):
    bound = 7
    brute = brute_les(chain.dims, chain.caps, chain.closed_left, chain.closed_right, bound)
    try:
        sol = solve_chain(chain)
    except InfeasibleLES:
        assert brute == []
        return
    assert brute
    assert sol.certified
    for i, iv in enumerate(sol.dims):
        values = [d[i] for d in brute]
        assert min(values) == iv.lo
        if iv.unbounded:
            assert max(values) >= bound
        else:
            assert max(values) == iv.hi


@st.composite
def feasible_instances(draw):
    """Random exact rank data, then hide a random subset of the dimensions."""
    N = draw(st.integers(1, 4))
    n = 3 * N
    ranks = [0] + draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    dims = [ranks[i] + ranks[i + 1] for i in range(n)]
    hidden = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    shown = [None if h else d for d, h in zip(dims, hidden)]
    zero = [(("B->E", "E->F", "F->B")[i % 3], i // 3 + 1) for i in range(n)
            if ranks[i + 1] == 0 and draw(st.booleans())]
    inst = LESInstance(shown[0::3], shown[1::3], shown[2::3], zero_maps=zero)
    return inst, dims


@settings(max_examples=1000)
@given(feasible_instances())
def test_witness_certification_on_feasible_instances(case):
    inst, truth = case
    sol = solve_les(inst)
    assert sol.certified
    chain = inst.chain()
    for (s, k), iv in sol.intervals.items():
        i = inst.node(s, k)
        assert iv.lo <= truth[i] <= iv.hi
        assert chain.check(iv.lo_witness)
        assert iv.lo_witness[i] + iv.lo_witness[i + 1] == iv.lo
        if not iv.unbounded:
            assert chain.check(iv.hi_witness)
            assert iv.hi_witness[i] + iv.hi_witness[i + 1] == iv.hi
    for (s, k), iv in sol.unknowns().items():
        if iv.lo > 0:
            dims = list(chain.dims)
            dims[inst.node(s, k)] = iv.lo - 1
            assert ExactChain(dims, chain.caps, chain.closed_left, chain.closed_right).bounds() is None


# ------------------------------------------------------------ isotropy bounds

def test_3cp2_isotropy():
    rep = isotropy_lower_bounds(THREE_CP2, GottliebBudget(CatBound(2)))
    assert rep.certified
    assert rep.allocation == {3: 2}
    assert rep.k0 == 3
    assert rep.total_shaving == 2
    assert rep.bounds[2] == 3
    for k in rep.degrees:
        if (k + 1) % 2 == 0 or k >= rep.k0:
            assert rep.bounds[k] == THREE_CP2[k + 1]


def test_even_degree_never_shaved():
    r = RankSequence.of([0, 0, 0, 0, 8, 0, 0], 4)
    rep = isotropy_lower_bounds(r, GottliebBudget(CatBound(3)))
    assert rep.bounds[3] == 8


def test_s2_bounds_vanish_beyond_three():
    r = RankSequence.of([0, 0, 1, 1] + [0] * 7, 2)
    rep = isotropy_lower_bounds(r, GottliebBudget(CatBound(1)))
    assert all(rep.bounds[k] == 0 for k in rep.degrees if k >= 3)
    assert rep.bounds[2] == 0 and rep.bounds[1] == 1


def test_budget_total_validated():
    with pytest.raises(ValueError):
        GottliebBudget(CatBound(2), 3)
    assert GottliebBudget.zero(CatBound(2)).limit == 0


rank_seqs = st.lists(st.integers(0, 5), min_size=2, max_size=9).map(
    lambda xs: RankSequence.of([0, 0] + xs, 4))


@settings(max_examples=500)
@given(rank_seqs, st.integers(1, 4))
def test_isotropy_invariants(ranks, cat):
    budget = GottliebBudget(CatBound(cat))
    rep = isotropy_lower_bounds(ranks, budget)
    assert rep.certified
    assert rep.total_shaving <= cat
    assert all(j % 2 == 1 for j in rep.allocation)
    assert all(b >= 0 for b in rep.bounds.values())
    for k in rep.degrees:
        if k >= rep.k0:
            assert rep.bounds[k] == ranks[k + 1]
    zero = isotropy_lower_bounds(ranks, GottliebBudget.zero(CatBound(cat)))
    assert zero.bounds == {k: ranks[k + 1] for k in zero.degrees}
    assert zero.total_shaving == 0


@settings(max_examples=300)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=6), st.integers(1, 3))
def test_greedy_allocation_is_prefix_worst(xs, cat):
    ranks = RankSequence.of([0, 0] + xs, 4)
    rep = isotropy_lower_bounds(ranks, GottliebBudget(CatBound(cat)))
    odd = [j for j in range(2, ranks.truncation + 1) if j % 2]
    for alloc in itertools.product(*[range(min(cat, ranks[j]) + 1) for j in odd]):
        if sum(alloc) > cat:
            continue
        a = dict(zip(odd, alloc))
        other = {k: ranks[k + 1] - a.get(k + 1, 0) for k in rep.degrees}
        for K in rep.degrees:
            assert sum(rep.bounds[k] for k in rep.degrees if k <= K) <= \
                sum(other[k] for k in rep.degrees if k <= K)


# ----------------------------------------------------------------- blow-up

def test_structure_group_sequence():
    assert structure_group_ranks(6) == [1, 0, 1, 0, 0, 0]


def test_blowup_3cp2():
    rep = blowup_scenario(THREE_CP2)
    assert rep.structure_group == [1, 0, 1] + [0] * 9
    assert rep.excluded == [1]
    for k in rep.isotropy.degrees:
        if k >= rep.isotropy.k0 and THREE_CP2[k + 1] > 0:
            assert rep.symp_bounds[k] and rep.symp_bounds[k] > 0
    values = list(rep.cumulative.values())
    assert values == sorted(values) and values[-1] > values[len(values) // 2]


@pytest.mark.parametrize("ranks", [[0, 0, 2, 2, 0], [0, 0, 1, 0, 0, 1]])
def test_blowup_rejects_small_b2(ranks):
    with pytest.raises(HypothesisError, match="b₂ > 2"):
        blowup_scenario(RankSequence.of(ranks, 4))


def test_blowup_rejects_non_four_manifold():
    with pytest.raises(HypothesisError):
        blowup_scenario(RankSequence.of([0, 0, 3, 0, 0, 0, 0], 6))
