"""Rank constraints in long exact sequences of dual rational homotopy groups.

An exact sequence of vector spaces V_0 -> V_1 -> ... -> V_{n-1} is encoded by
the ranks of its maps.  With ``r_in`` and ``r_out`` the ranks of the maps into
and out of V_i, exactness says ``r_in + r_out = dim V_i``.  Unknown dimensions
are free; zero-map annotations and rank caps bound individual ranks.  Because
the constraint graph is a path, bounds propagation to a fixed point gives the
exact feasible ranges, and every endpoint is certified by an explicit witness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .dichotomy import CatBound
from .minimal_model import RankSequence

INF = math.inf
KINDS = ("B->E", "E->F", "F->B")


class InfeasibleLES(ValueError):
    def __init__(self, window: Tuple[int, int], labels: Sequence[str]) -> None:
        a, b = window
        super().__init__("infeasible rank constraints on " + " -> ".join(labels[a:b + 1]))
        self.window = window
        self.labels = list(labels[a:b + 1])


class HypothesisError(ValueError):
    """Input does not satisfy the hypotheses of the scenario."""


@dataclass
class ExactChain:
    """An exact sequence segment with optional closed ends.

    ``caps[i]`` bounds the rank of the map out of node i (the last node's
    outgoing map leaves the segment).  A cap of 0 is a zero-map annotation.
    """

    dims: List[Optional[int]]
    caps: Dict[int, int] = field(default_factory=dict)
    closed_left: bool = True
    closed_right: bool = False
    labels: Optional[List[str]] = None

    def __post_init__(self) -> None:
        if any(d is not None and d < 0 for d in self.dims):
            raise ValueError("known dimensions must be nonnegative")
        n = len(self.dims)
        for i in self.caps:
            if not 0 <= i < n:
                raise ValueError(f"map annotation {i} outside the range")
        if self.labels is None:
            self.labels = [f"V{i}" for i in range(n)]

    # variable j is the rank of the map into node j (j = 0..n); node i sits
    # between variables i and i+1
    def _initial(self, lo_hi=None):
        n = len(self.dims)
        lo = [0] * (n + 1)
        hi: List[float] = [INF] * (n + 1)
        if self.closed_left:
            hi[0] = 0
        if self.closed_right:
            hi[n] = 0
        for i, c in self.caps.items():
            hi[i + 1] = min(hi[i + 1], c)
        for i, d in enumerate(self.dims):
            if d is not None:
                hi[i] = min(hi[i], d)
                hi[i + 1] = min(hi[i + 1], d)
        if lo_hi:
            for j, (a, b) in lo_hi.items():
                lo[j] = max(lo[j], a)
                hi[j] = min(hi[j], b)
        return lo, hi

    def _propagate(self, lo, hi, nodes=None):
        """Tighten bounds to a fixed point; returns False on an empty range."""
        dims = self.dims
        idx = range(len(dims)) if nodes is None else nodes
        changed = True
        while changed:
            changed = False
            for i in idx:
                d = dims[i]
                if d is None:
                    continue
                a, b = i, i + 1
                nlo_a = max(lo[a], d - hi[b])
                nhi_a = min(hi[a], d - lo[b])
                nlo_b = max(lo[b], d - hi[a])
                nhi_b = min(hi[b], d - lo[a])
                if (nlo_a, nhi_a, nlo_b, nhi_b) != (lo[a], hi[a], lo[b], hi[b]):
                    lo[a], hi[a], lo[b], hi[b] = nlo_a, nhi_a, nlo_b, nhi_b
                    changed = True
                if lo[a] > hi[a] or lo[b] > hi[b]:
                    return False
        return all(l <= h for l, h in zip(lo, hi))

    def bounds(self, fixed=None):
        lo, hi = self._initial(fixed)
        if not self._propagate(lo, hi):
            return None
        return lo, hi

    def witness(self, fixed=None) -> Optional[List[int]]:
        """A full integer rank assignment respecting ``fixed`` ranges, or None."""
        b = self.bounds(fixed)
        if b is None:
            return None
        lo, hi = b
        for j in range(len(lo)):
            lo[j] = hi[j] = lo[j]
            if not self._propagate(lo, hi):
                return None
        return [int(x) for x in lo]

    def check(self, ranks: Sequence[int]) -> bool:
        """Does a rank assignment satisfy every constraint?"""
        lo, hi = self._initial()
        if any(r < l or r > h for r, l, h in zip(ranks, lo, hi)):
            return False
        return all(d is None or ranks[i] + ranks[i + 1] == d for i, d in enumerate(self.dims))

    def minimal_infeasible_window(self) -> Tuple[int, int]:
        n = len(self.dims)
        for length in range(1, n + 1):
            for a in range(0, n - length + 1):
                b = a + length - 1
                lo, hi = self._initial()
                # only constraints inside the window, boundaries only at the real ends
                if a > 0:
                    lo[a], hi[a] = 0, INF
                    if a - 1 in self.caps:
                        hi[a] = self.caps[a - 1]
                if b < n - 1:
                    lo[b + 1], hi[b + 1] = 0, INF
                    if b in self.caps:
                        hi[b + 1] = self.caps[b]
                for j in list(range(0, a)) + list(range(b + 2, n + 1)):
                    lo[j], hi[j] = 0, INF
                for i in range(a, b + 1):
                    d = self.dims[i]
                    if d is not None:
                        hi[i] = min(hi[i], d)
                        hi[i + 1] = min(hi[i + 1], d)
                if not self._propagate(lo, hi, range(a, b + 1)):
                    return a, b
        return 0, n - 1


@dataclass
class Interval:
    lo: int
    hi: float  # math.inf when unbounded above
    lo_witness: List[int]
    hi_witness: Optional[List[int]]

    @property
    def unbounded(self) -> bool:
        return self.hi == INF

    def __str__(self) -> str:
        return f"[{self.lo}, {'∞' if self.unbounded else int(self.hi)}]"


@dataclass
class ChainSolution:
    chain: ExactChain
    dims: List[Interval]  # one per node (known nodes get a degenerate interval)
    ranks: List[Tuple[int, float]]
    certified: bool


def solve_chain(chain: ExactChain) -> ChainSolution:
    b = chain.bounds()
    if b is None:
        raise InfeasibleLES(chain.minimal_infeasible_window(), chain.labels)
    lo, hi = b
    out = []
    certified = True
    for i, d in enumerate(chain.dims):
        dlo = lo[i] + lo[i + 1]
        dhi = hi[i] + hi[i + 1]
        if d is not None:
            dlo = dhi = d
        wlo = chain.witness({i: (lo[i], lo[i]), i + 1: (lo[i + 1], lo[i + 1])}) if d is None \
            else chain.witness()
        whi = None
        if dhi != INF:
            whi = chain.witness({i: (hi[i], hi[i]), i + 1: (hi[i + 1], hi[i + 1])}) if d is None \
                else wlo
        certified &= wlo is not None and chain.check(wlo) and wlo[i] + wlo[i + 1] == dlo
        if dhi != INF:
            certified &= whi is not None and chain.check(whi) and whi[i] + whi[i + 1] == dhi
        if d is None:
            # one step outside the interval must be infeasible
            if dlo > 0:
                certified &= _infeasible_with(chain, i, dlo - 1)
            if dhi != INF:
                certified &= _infeasible_with(chain, i, int(dhi) + 1)
        out.append(Interval(int(dlo), dhi if dhi == INF else int(dhi), wlo, whi))
    ranks = list(zip(lo, hi))
    return ChainSolution(chain, out, ranks, certified)


def _infeasible_with(chain: ExactChain, i: int, value: int) -> bool:
    dims = list(chain.dims)
    dims[i] = value
    probe = ExactChain(dims, dict(chain.caps), chain.closed_left, chain.closed_right, chain.labels)
    return probe.bounds() is None


# ------------------------------------------------------------------ LES layer

@dataclass
class LESInstance:
    """Π^k(B) -> Π^k(E) -> Π^k(F) -> Π^{k+1}(B) for k = 1..N, starting from 0.

    Rows are indexed by degree (entry 0 is degree 1); None marks Unknown.
    ``zero_maps`` holds (kind, k) with kind in ``KINDS``; ``rank_caps`` maps
    the same keys to upper bounds on the rank.
    """

    dims_B: List[Optional[int]]
    dims_E: List[Optional[int]]
    dims_F: List[Optional[int]]
    zero_maps: List[Tuple[str, int]] = field(default_factory=list)
    rank_caps: Dict[Tuple[str, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.dims_B)
        if len(self.dims_E) != n or len(self.dims_F) != n:
            raise ValueError("the three rows must cover the same degree range")
        for kind, k in list(self.zero_maps) + list(self.rank_caps):
            if kind not in KINDS:
                raise ValueError(f"unknown map kind {kind!r}")
            if not 1 <= k <= n:
                raise ValueError(f"map annotation at degree {k} outside [1, {n}]")

    @property
    def N(self) -> int:
        return len(self.dims_B)

    @staticmethod
    def node(space: str, k: int) -> int:
        return 3 * (k - 1) + "BEF".index(space)

    def chain(self) -> ExactChain:
        dims: List[Optional[int]] = []
        labels = []
        for k in range(1, self.N + 1):
            for s, row in zip("BEF", (self.dims_B, self.dims_E, self.dims_F)):
                dims.append(row[k - 1])
                labels.append(f"Π^{k}({s})")
        caps: Dict[int, int] = {}
        for kind, k in self.zero_maps:
            caps[self.node(kind[0], k)] = 0
        for (kind, k), c in self.rank_caps.items():
            i = self.node(kind[0], k)
            caps[i] = min(caps.get(i, c), c)
        return ExactChain(dims, caps, closed_left=True, closed_right=False, labels=labels)

    @classmethod
    def from_json(cls, doc: Mapping) -> "LESInstance":
        def row(v):
            return [None if x in (None, "?") else int(x) for x in v]
        zm = [(z["map"], int(z["degree"])) for z in doc.get("zero_maps", [])]
        caps = {(c["map"], int(c["degree"])): int(c["cap"]) for c in doc.get("rank_caps", [])}
        return cls(row(doc["B"]), row(doc["E"]), row(doc["F"]), zm, caps)


@dataclass
class LESSolution:
    instance: LESInstance
    intervals: Dict[Tuple[str, int], Interval]  # every entry, keyed by (space, degree)
    certified: bool

    def unknowns(self) -> Dict[Tuple[str, int], Interval]:
        rows = {"B": self.instance.dims_B, "E": self.instance.dims_E, "F": self.instance.dims_F}
        return {key: iv for key, iv in self.intervals.items() if rows[key[0]][key[1] - 1] is None}


def solve_les(instance: LESInstance) -> LESSolution:
    sol = solve_chain(instance.chain())
    intervals = {}
    for k in range(1, instance.N + 1):
        for s in "BEF":
            intervals[(s, k)] = sol.dims[instance.node(s, k)]
    return LESSolution(instance, intervals, sol.certified)


# -------------------------------------------------------------- Gottlieb bounds

@dataclass(frozen=True)
class GottliebBudget:
    """Rational Gottlieb ranks: zero in even degrees, total at most cat."""

    cat: CatBound
    total: Optional[int] = None  # total ev*-image allowance; defaults to cat

    def __post_init__(self) -> None:
        if self.total is not None and not 0 <= self.total <= self.cat.value:
            raise ValueError(f"budget total must lie in [0, cat = {self.cat.value}]")

    @classmethod
    def zero(cls, cat: CatBound) -> "GottliebBudget":
        """No evaluation image at all: the pure-exactness case."""
        return cls(cat, 0)

    @property
    def limit(self) -> int:
        return self.cat.value if self.total is None else self.total

    def allowance_cap(self, degree: int) -> int:
        return 0 if degree % 2 == 0 else self.limit


@dataclass
class BoundReport:
    degrees: List[int]  # k = 1..N-1
    bounds: Dict[int, int]  # lower bound on dim Π^k(G_pt) under the worst prefix allocation
    pointwise: Dict[int, int]  # degreewise worst case, each degree on its own
    unshifted: Dict[int, int]  # dim Π^k(X), the unshifted reading for k >= k0
    allocation: Dict[int, int]  # ev*-image allowance per degree of X
    k0: int
    cat: int
    certified: bool

    @property
    def total_shaving(self) -> int:
        return sum(self.allocation.values())

    def as_dict(self) -> dict:
        return {"k0": self.k0, "cat": self.cat, "total_shaving": self.total_shaving,
                "certified": self.certified,
                "rows": [{"k": k, "bound": self.bounds[k], "pointwise": self.pointwise[k],
                          "unshifted": self.unshifted[k],
                          "allowance_at_k+1": self.allocation.get(k + 1, 0)}
                         for k in self.degrees]}


def isotropy_lower_bounds(ranks_X: RankSequence, budget: GottliebBudget) -> BoundReport:
    """Lower bounds on dim Π^k(G_pt) for an evaluation fibration G_pt -> G -> X.

    Exactness at Π^{k+1}(X) gives dim Π^k(G_pt) >= dim Π^{k+1}(X) - rank ev*.
    The ev* ranks are capped by the Gottlieb budget; the allocation spends it
    in the lowest admissible degrees, which minimizes every cumulative sum of
    the bounds at once.
    """
    N = ranks_X.truncation
    cat = budget.cat.value
    remaining = budget.limit
    alloc: Dict[int, int] = {}
    for j in range(2, N + 1):
        a = min(remaining, budget.allowance_cap(j), ranks_X[j])
        if a:
            alloc[j] = a
            remaining -= a
    degrees = list(range(1, N))
    bounds = {k: ranks_X[k + 1] - alloc.get(k + 1, 0) for k in degrees}
    pointwise = {k: ranks_X[k + 1] - min(budget.allowance_cap(k + 1), ranks_X[k + 1])
                 for k in degrees}
    unshifted = {k: ranks_X[k] for k in degrees}
    k0 = max(alloc, default=1)

    # cross-check with the generic solver: base X known, total G unknown,
    # ev* capped by the allocation
    inst = LESInstance(list(ranks_X.ranks[1:]), [None] * N, [None] * N,
                       rank_caps={("B->E", j): alloc.get(j, 0) for j in range(1, N + 1)})
    sol = solve_les(inst)
    certified = sol.certified and all(sol.intervals[("F", k)].lo == bounds[k] for k in degrees)
    return BoundReport(degrees, bounds, pointwise, unshifted, alloc, k0, cat, certified)


# ------------------------------------------------------------ blow-up ladder

STRUCTURE_GROUP_DEGREES = (1, 3)  # rational homotopy of Sp(4, R) ~ U(2): Λ(c1, c2)


@dataclass
class BlowupReport:
    b2: int
    structure_group: List[int]  # ranks at degrees 1..N
    obstruction_degrees: List[int]
    surjectivity: Dict[int, str]  # degree -> status of f_* on π_k ⊗ Q
    isotropy: BoundReport
    symp_bounds: Dict[int, Optional[int]]  # lower bounds on dim π_k(Symp^{U(2)}) ⊗ Q
    cumulative: Dict[int, int]
    excluded: List[int]

    def positive_degrees(self) -> List[int]:
        return [k for k, b in self.symp_bounds.items() if b]

    def as_dict(self) -> dict:
        return {"b2": self.b2, "structure_group": self.structure_group,
                "obstruction_degrees": self.obstruction_degrees,
                "surjectivity": {str(k): v for k, v in self.surjectivity.items()},
                "symp_bounds": {str(k): v for k, v in self.symp_bounds.items()},
                "cumulative": {str(k): v for k, v in self.cumulative.items()},
                "excluded": self.excluded, "k0": self.isotropy.k0,
                "isotropy": self.isotropy.as_dict()}


def structure_group_ranks(N: int) -> List[int]:
    return [1 if k in STRUCTURE_GROUP_DEGREES else 0 for k in range(1, N + 1)]


def blowup_scenario(ranks_M: RankSequence, cat: Optional[CatBound] = None) -> BlowupReport:
    """Rank skeleton of the blow-up argument for a simply connected 4-manifold M.

    The ladder compares Symp^{U(2)}(M, B) -> Symp(M) -> Emb^{U(2)}(B, M) with
    the evaluation fibration Symp(M, pt) -> Symp(M) -> M.  The embedding map
    is taken to be rationally surjective away from degree 2; there the
    structure group obstruction depends on the first Chern class and the
    degree is excluded.
    """
    if ranks_M.formal_dimension != 4:
        raise HypothesisError("blow-up scenario needs a 4-manifold (formal dimension 4)")
    b2 = ranks_M[2]
    if b2 <= 2:
        raise HypothesisError(f"b₂ = dim H²(M) = {b2}; the scenario requires b₂ > 2")
    N = ranks_M.truncation
    sg = structure_group_ranks(N)
    obstruction = [k + 1 for k in STRUCTURE_GROUP_DEGREES]
    surj = {}
    for k in range(2, N + 1):
        if k == 2:
            surj[k] = "chern-dependent (excluded)"
        elif k == 4:
            surj[k] = "surjective (no nonzero-degree map S^4 -> M)"
        else:
            surj[k] = "surjective"
    iso = isotropy_lower_bounds(ranks_M, GottliebBudget(cat or CatBound(2, "4-manifold default")))
    symp: Dict[int, Optional[int]] = {}
    excluded = []
    for k in iso.degrees:
        if surj.get(k + 1, "").startswith("surjective"):
            symp[k] = iso.bounds[k]
        else:
            symp[k] = None
            excluded.append(k)
    cumulative = {}
    acc = 0
    for k in iso.degrees:
        acc += symp[k] or 0
        cumulative[k] = acc
    return BlowupReport(b2, sg, obstruction, surj, iso, symp, cumulative, excluded)
