"""Truncated Sullivan minimal models of simply connected finite targets.

The builder runs the standard degree-by-degree construction.  In degree k it
first adds closed generators for the cokernel of H^k(phi), then one generator
per class in the kernel of H^{k+1}(phi) whose differential is a chosen
representative cocycle.  Cohomology of the partial model in degree k+1 is
computed with the "clearing" shortcut: monomials that are pivots of the
coboundary echelon basis are dropped before the cocycle kernel is taken, so the
kernel vectors directly span a complement of the coboundaries.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .dga import (
    DGAError,
    FiniteDGA,
    FreeDGA,
    FreeMorphism,
    NotSimplyConnected,
    cohomology,
    induced_map_on_cohomology,
    require_simply_connected,
    validate_dga,
)
from .graded_algebra import FreeGradedAlgebra, Generator, Monomial, Terms, format_terms
from .linalg import Echelon, SparseMatrix, solve_linear

log = logging.getLogger(__name__)

DEFAULT_BASIS_CAP = 250_000


class ModelBudgetExceeded(RuntimeError):
    """A degree's monomial basis is larger than the configured cap."""

    def __init__(self, degree: int, size: int, cap: int, partial: "MinimalModel") -> None:
        super().__init__(f"degree {degree} basis has {size} monomials (cap {cap}); "
                         f"partial model complete through degree {partial.truncation}")
        self.degree = degree
        self.size = size
        self.cap = cap
        self.partial = partial


@dataclass(frozen=True)
class LedgerEntry:
    name: str
    degree: int
    kind: str  # "cokernel" (d = 0, hits a new class) or "kernel" (kills a class)


@dataclass
class StageRecord:
    """Bookkeeping for one degree of the construction."""

    degree: int
    coker_dim: int  # dim coker H^k(phi) before the stage
    next_cohomology_dim: int  # dim H^{k+1}(model) after the cokernel step
    kernel_dim: int  # dim ker H^{k+1}(phi) after the cokernel step
    basis_size: int  # monomials in degree k+1
    seconds: float


@dataclass
class MinimalModel:
    dga: FreeDGA
    target: FiniteDGA
    phi: Dict[int, Dict[int, Fraction]]  # generator position -> target vector
    truncation: int
    ledger: List[LedgerEntry]
    stages: List[StageRecord] = field(default_factory=list)
    certificate: Optional["Certificate"] = None

    @property
    def algebra(self) -> FreeGradedAlgebra:
        return self.dga.algebra

    def morphism(self) -> FreeMorphism:
        return FreeMorphism(self.dga, self.target, self.phi)

    def generators_in(self, k: int) -> List[Generator]:
        return [g for g in self.algebra.generators if g.degree == k]

    def d_str(self, name: str) -> str:
        return format_terms(self.dga.d_generator(self.algebra.position(name)),
                            self.algebra.format_monomial)

    def export(self) -> dict:
        """Generator ledger with differential and phi images in element syntax."""
        gens = []
        kinds = {e.name: e.kind for e in self.ledger}
        for p, g in enumerate(self.algebra.generators):
            gens.append({
                "name": g.name,
                "degree": g.degree,
                "kind": kinds.get(g.name, "?"),
                "d": self.d_str(g.name),
                "phi": self.target.format(self.phi.get(p, {})),
            })
        return {"target": self.target.name, "truncation": self.truncation,
                "generators": gens}

    @classmethod
    def from_export(cls, doc: dict, target: FiniteDGA) -> "MinimalModel":
        gens = [Generator(int(g["degree"]), i, g["name"]) for i, g in enumerate(doc["generators"])]
        alg = FreeGradedAlgebra(gens)
        dga = FreeDGA(alg, {g["name"]: g["d"] for g in doc["generators"]},
                      truncation=int(doc["truncation"]))
        phi = {alg.position(g["name"]): target.parse(g["phi"]) for g in doc["generators"]}
        ledger = [LedgerEntry(g["name"], int(g["degree"]), g.get("kind", "?"))
                  for g in doc["generators"]]
        return cls(dga, target, {p: v for p, v in phi.items() if v}, int(doc["truncation"]), ledger)


@dataclass(frozen=True)
class RankSequence:
    """dim Π^k for k = 0..truncation (index = degree)."""

    ranks: Tuple[int, ...]
    truncation: int
    formal_dimension: int

    def __post_init__(self) -> None:
        if len(self.ranks) != self.truncation + 1:
            raise ValueError("ranks must cover degrees 0..truncation")
        if self.ranks[0] or (len(self.ranks) > 1 and self.ranks[1]):
            raise ValueError("no generators in degrees 0 and 1")
        if any(r < 0 for r in self.ranks):
            raise ValueError("ranks are nonnegative")

    def __getitem__(self, k: int) -> int:
        return self.ranks[k] if 0 <= k <= self.truncation else 0

    def nonzero(self) -> Dict[int, int]:
        return {k: r for k, r in enumerate(self.ranks) if r}

    @classmethod
    def of(cls, ranks, formal_dimension: int) -> "RankSequence":
        ranks = tuple(ranks)
        return cls(ranks, len(ranks) - 1, formal_dimension)


# ------------------------------------------------------------------ builder

def _cocycle_complement(dga: FreeDGA, k: int):
    """Cocycles in degree k spanning a complement of the coboundaries.

    Returns (representatives as local vectors, coboundary echelon).
    """
    alg = dga.algebra
    bounds = Echelon(track_history=False)
    if k > 0:
        for col in dga.columns(k - 1):
            bounds.add(col)
    cleared = set(bounds.pivots)
    basis = alg.monomial_basis(k)
    index = alg.basis_index(k + 1)
    keep = [i for i in range(len(basis)) if i not in cleared]
    ech = Echelon()
    reps = []
    for j, i in enumerate(keep):
        col = {index[m]: c for m, c in dga.d_mono(basis[i]).items()}
        dep = ech.add(col)
        if dep is not None:
            vec = {keep[t]: -c for t, c in dep.items()}
            vec[i] = Fraction(1)
            reps.append(dict(sorted(vec.items())))
    return reps, bounds


def build_minimal_model(target: FiniteDGA, N: int, basis_cap: int = DEFAULT_BASIS_CAP,
                        certify: bool = True) -> MinimalModel:
    """Minimal model of ``target`` through degree N (generators of degree <= N)."""
    if N < 2:
        raise ValueError("truncation must be at least 2")
    validate_dga(target).raise_if_invalid()
    require_simply_connected(target)

    gens: List[Generator] = []
    dvals: Dict[str, Terms] = {}
    phi: Dict[int, Dict[int, Fraction]] = {}
    ledger: List[LedgerEntry] = []
    stages: List[StageRecord] = []
    counter = {"cokernel": 0, "kernel": 0}

    alg = FreeGradedAlgebra([])
    dga = FreeDGA(alg, {})
    # classes of H^k(model) pushed to the target, stored as target vectors
    image_classes: List[Dict[int, Fraction]] = []

    def snapshot(trunc: int) -> MinimalModel:
        return MinimalModel(dga, target, dict(phi), trunc, list(ledger), list(stages))

    for k in range(2, N + 1):
        t0 = time.perf_counter()
        # (a) cokernel of H^k(phi)
        tk = cohomology(target, k)
        span = Echelon(track_history=False)
        for b in tk.coboundaries:
            span.add(b)
        for v in image_classes:
            span.add(target.to_vector(k, v))
        new = []
        for r in tk.representatives:
            if span.add(r) is None:
                new.append(r)
        coker_dim = len(new)
        if new:
            fresh = []
            for r in new:
                counter["cokernel"] += 1
                g = Generator(k, len(gens) + len(fresh), _name(k, counter["cokernel"], "a", len(new)))
                fresh.append((g, target.from_vector(k, r)))
            alg = alg.extend(g for g, _ in fresh)
            for g, img in fresh:
                gens.append(g)
                phi[alg.position(g.name)] = img
                ledger.append(LedgerEntry(g.name, k, "cokernel"))
            dga = dga.extended(alg, dvals)

        # (b) kernel of H^{k+1}(phi)
        size = len(alg.monomial_basis(k + 1))
        if size > basis_cap:
            raise ModelBudgetExceeded(k + 1, size, basis_cap, snapshot(k - 1))
        reps, _ = _cocycle_complement(dga, k + 1)
        f = FreeMorphism(dga, target, phi)
        tk1 = cohomology(target, k + 1)
        basis = alg.monomial_basis(k + 1)
        if tk1.dimension == 0 and not tk1.coboundaries:
            kernel = reps
            image_classes = []
        else:
            ech = Echelon()
            for b in tk1.coboundaries:
                ech.add(b)
            nb = len(tk1.coboundaries)
            kernel = []
            images = []
            for r in reps:
                img = f.image(k + 1, r)
                images.append(img)
                dep = ech.add(img)
                if dep is not None:
                    z: Dict[int, Fraction] = {}
                    for t, c in dep.items():
                        if t >= nb:
                            for i, v in reps[t - nb].items():
                                z[i] = z.get(i, 0) - c * v
                    for i, v in r.items():
                        z[i] = z.get(i, 0) + v
                    kernel.append({i: v for i, v in sorted(z.items()) if v})
            image_classes = [target.from_vector(k + 1, v) for v in images if v]
        if kernel:
            fresh = []
            for z in kernel:
                counter["kernel"] += 1
                g = Generator(k, len(gens) + len(fresh), _name(k, counter["kernel"], "b", len(kernel)))
                dterms = {basis[i]: c for i, c in z.items()}
                fresh.append((g, dterms))
            alg = alg.extend(g for g, _ in fresh)
            for g, dterms in fresh:
                gens.append(g)
                dvals[g.name] = dterms
                pos = alg.position(g.name)
                target_dz = f.on_terms(dterms)
                if target_dz:
                    prim = _primitive(target, k, target_dz)
                    if prim:
                        phi[pos] = prim
                ledger.append(LedgerEntry(g.name, k, "kernel"))
            dga = dga.extended(alg, dvals)
        stages.append(StageRecord(k, coker_dim, len(reps), len(kernel), size,
                                  time.perf_counter() - t0))
        log.info("degree %d: +%d closed, +%d killing generators (basis %d, %.2fs)",
                 k, coker_dim, len(kernel), size, stages[-1].seconds)
        counter = {"cokernel": 0, "kernel": 0}

    model = MinimalModel(dga.extended(alg, dvals, truncation=N), target, phi, N, ledger, stages)
    if certify:
        model.certificate = verify_model(model, target, N)
        if not model.certificate.ok:
            raise DGAError(f"builder produced an uncertified model: {model.certificate.failures[0]}")
    return model


def _name(k: int, i: int, tag: str, count: int) -> str:
    return f"{tag}{k}" if count == 1 else f"{tag}{k}_{i}"


def _primitive(target: FiniteDGA, k: int, value: Dict[int, Fraction]) -> Dict[int, Fraction]:
    """Some t in target degree k with d t = value."""
    sol = solve_linear(SparseMatrix.from_columns(target.dim(k + 1), target.columns(k)))
    x = sol.preimage(target.to_vector(k + 1, value))
    if x is None:
        raise DGAError(f"phi(dv) has no primitive in degree {k}; construction is inconsistent")
    return target.from_vector(k, x)


def pi_ranks(model: MinimalModel) -> RankSequence:
    ranks = [0] * (model.truncation + 1)
    for g in model.algebra.generators:
        ranks[g.degree] += 1
    fd = max((k for k in range(model.target.top_degree + 1)
              if cohomology(model.target, k).dimension), default=0)
    return RankSequence(tuple(ranks), model.truncation, fd)


# ------------------------------------------------------------ certification

@dataclass
class Failure:
    check: str
    degree: Optional[int]
    witness: str

    def __str__(self) -> str:
        where = f" in degree {self.degree}" if self.degree is not None else ""
        return f"{self.check}{where}: {self.witness}"


@dataclass
class Certificate:
    ok: bool
    failures: List[Failure]
    checks: Dict[str, bool]
    cohomology_dims: Dict[int, Tuple[int, int]]  # degree -> (model, target)

    def summary(self) -> str:
        if self.ok:
            return "certified: " + ", ".join(f"{c} ok" for c in self.checks)
        return "FAILED: " + "; ".join(str(f) for f in self.failures)


def _rank_out_of(dga, k: int) -> int:
    ech = Echelon(track_history=False)
    for col in dga.columns(k):
        ech.add(col)
    return len(ech)


def verify_model(model: MinimalModel, target: FiniteDGA, N: int) -> Certificate:
    """Independent re-check of a model against its target through degree N.

    Uses ranks of the model's differentials (not the builder's cocycle
    choices) and only forms H^k(phi) explicitly where the target has
    cohomology.
    """
    dga = model.dga
    alg = dga.algebra
    failures: List[Failure] = []
    checks = {}

    rep = validate_dga(dga)
    dsq = [v for v in rep.violations if v.kind in ("d_squared", "degree")]
    for v in dsq:
        failures.append(Failure("d_squared", None, f"{v.witness}: {v.detail}"))
    checks["d_squared"] = not dsq

    minimal = True
    for p, g in enumerate(alg.generators):
        if g.degree < 2:
            failures.append(Failure("minimality", g.degree, f"generator {g.name} in degree {g.degree}"))
            minimal = False
        linear = [m for m in dga.d_generator(p) if len(m) == 1 and m[0][1] == 1]
        if linear:
            failures.append(Failure("minimality", g.degree,
                                    f"d({g.name}) has linear term {alg.format_monomial(linear[0])}"))
            minimal = False
    checks["minimality"] = minimal

    f = FreeMorphism(dga, target, model.phi)
    try:
        f.check_chain_map()
        checks["chain_map"] = True
    except DGAError as exc:
        failures.append(Failure("chain_map", None, str(exc)))
        checks["chain_map"] = False
        return Certificate(False, failures, checks, {})

    dims = {}
    iso = True
    ranks = {1: _rank_out_of(dga, 1)}
    for k in range(2, N + 1):
        ranks[k] = _rank_out_of(dga, k)
    for k in range(0, N + 1):
        h_model = dga.dim(k) - ranks.get(k, 0) - ranks.get(k - 1, 0)
        h_target = cohomology(target, k).dimension
        dims[k] = (h_model, h_target)
        if h_model != h_target:
            iso = False
            failures.append(Failure("iso", k, f"dim H^{k}(model) = {h_model} but target has {h_target}"))
            continue
        if h_target:
            ind = induced_map_on_cohomology(f, k)
            if not ind.is_isomorphism:
                iso = False
                failures.append(Failure("iso", k, f"H^{k}(phi) has rank {ind.rank} of {h_target}"))
    checks["iso"] = iso
    return Certificate(not failures, failures, checks, dims)
