"""Differential graded algebras: free ones (Λ V, d) and finite-dimensional targets.

Both kinds expose the same cochain interface used by :func:`cohomology`:
``dim(k)`` and ``columns(k)`` (the differential out of degree k as sparse
columns in local degree-(k+1) coordinates).
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .graded_algebra import (
    Element,
    FreeGradedAlgebra,
    Monomial,
    Terms,
    add_into,
    format_terms,
    mul_terms,
    parse_terms,
)
from .linalg import Echelon, SparseMatrix, Vector, solve_linear

TVector = Dict[int, Fraction]  # element of a FiniteDGA, keyed by global basis index


class DGAError(ValueError):
    pass


class NotSimplyConnected(DGAError):
    pass


class FreeDGA:
    """(Λ V, d) with d given on generators and extended as a derivation."""

    def __init__(self, algebra: FreeGradedAlgebra,
                 differential: Mapping[Union[int, str], Union[Element, str, Mapping]] = (),
                 truncation: Optional[int] = None) -> None:
        self.algebra = algebra
        self.truncation = truncation
        dvals: Dict[int, Terms] = {}
        for key, val in dict(differential).items():
            pos = algebra.position(key) if isinstance(key, str) else key
            if isinstance(val, str):
                terms = algebra.parse(val).terms
            elif isinstance(val, Element):
                terms = val.terms
            else:
                terms = {m: Fraction(c) for m, c in val.items() if c}
            if terms:
                dvals[pos] = dict(terms)
        self.dvalues = dvals
        self._dcache: Dict[Monomial, Terms] = {}

    def __repr__(self) -> str:
        return f"FreeDGA({self.algebra!r}, {len(self.dvalues)} nonzero d)"

    def extended(self, algebra: FreeGradedAlgebra, differential: Mapping,
                 truncation: Optional[int] = None) -> "FreeDGA":
        """Same differential on old generators plus new values; keeps the memo."""
        if not algebra.is_extension_of(self.algebra):
            raise DGAError("not an extension of this algebra")
        out = FreeDGA(algebra, differential, truncation)
        for p, v in self.dvalues.items():
            if out.dvalues.get(p) != v:
                raise DGAError("extension changes an existing differential")
        out._dcache = self._dcache
        return out

    def d_generator(self, pos: int) -> Terms:
        return self.dvalues.get(pos, {})

    def d_mono(self, m: Monomial) -> Terms:
        cached = self._dcache.get(m)
        if cached is not None:
            return cached
        if not m:
            out: Terms = {}
        else:
            alg = self.algebra
            (p, e), rest = m[0], m[1:]
            dg = self.dvalues.get(p)
            out = {}
            if dg:
                if e > 1:
                    lead = {((p, e - 1),): Fraction(e)}
                    part = mul_terms(alg, lead, dg)
                else:
                    part = dg
                add_into(out, mul_terms(alg, part, {rest: Fraction(1)}))
            if rest:
                drest = self.d_mono(rest)
                if drest:
                    sign = -1 if alg.odd[p] and e % 2 else 1
                    add_into(out, mul_terms(alg, {((p, e),): Fraction(sign)}, drest))
        self._dcache[m] = out
        return out

    def d_terms(self, terms: Mapping[Monomial, Fraction]) -> Terms:
        out: Terms = {}
        for m, c in terms.items():
            add_into(out, self.d_mono(m), c)
        return out

    def d(self, x: Element) -> Element:
        if x.algebra is not self.algebra:
            raise DGAError("element from a different algebra")
        return Element(self.algebra, self.d_terms(x.terms))

    # cochain interface
    def dim(self, k: int) -> int:
        return len(self.algebra.monomial_basis(k))

    def columns(self, k: int) -> List[Vector]:
        index = self.algebra.basis_index(k + 1)
        return [{index[m]: c for m, c in self.d_mono(m).items()}
                for m in self.algebra.monomial_basis(k)]

    def to_vector(self, k: int, terms: Mapping[Monomial, Fraction]) -> Vector:
        index = self.algebra.basis_index(k)
        return {index[m]: c for m, c in terms.items()}

    def from_vector(self, k: int, vec: Mapping[int, Fraction]) -> Element:
        basis = self.algebra.monomial_basis(k)
        return Element(self.algebra, {basis[i]: c for i, c in vec.items()})


class FiniteDGA:
    """A finite-dimensional graded-commutative algebra with differential.

    Basis element 0 must be the unit (degree 0).  ``products[(i, j)]`` holds
    the structure constants of ``b_i * b_j``; unit products are implicit and a
    missing ``(j, i)`` entry is filled in by graded commutativity.
    """

    def __init__(self, basis: Sequence[Tuple[str, int]],
                 products: Mapping[Tuple[int, int], Mapping[int, object]] = (),
                 differential: Mapping[int, Mapping[int, object]] = (),
                 name: str = "") -> None:
        if not basis or basis[0][1] != 0:
            raise DGAError("basis element 0 must be the unit in degree 0")
        self.name = name
        self.names: Tuple[str, ...] = tuple(n for n, _ in basis)
        self.degrees: Tuple[int, ...] = tuple(d for _, d in basis)
        if len(set(self.names)) != len(self.names):
            raise DGAError("basis names must be unique")
        if any(d < 0 for d in self.degrees):
            raise DGAError("negative degree")
        self._index = {n: i for i, n in enumerate(self.names)}
        self.by_degree: Dict[int, List[int]] = {}
        for i, d in enumerate(self.degrees):
            self.by_degree.setdefault(d, []).append(i)
        self.local = {i: self.by_degree[d].index(i) for i, d in enumerate(self.degrees)}
        prods: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j), v in dict(products).items():
            vec = {k: Fraction(c) for k, c in v.items() if c}
            if vec:
                prods[(i, j)] = vec
        for (i, j), vec in list(prods.items()):
            if (j, i) not in prods and i != j:
                s = -1 if self.degrees[i] % 2 and self.degrees[j] % 2 else 1
                prods[(j, i)] = {k: s * c for k, c in vec.items()}
        for i in range(len(self.names)):
            prods[(0, i)] = {i: Fraction(1)}
            prods[(i, 0)] = {i: Fraction(1)}
        self.products = prods
        self.differential: Dict[int, Dict[int, Fraction]] = {
            i: {k: Fraction(c) for k, c in v.items() if c}
            for i, v in dict(differential).items() if any(v.values())}

    def __repr__(self) -> str:
        return f"FiniteDGA({self.name or '?'}, dims={self.dims()})"

    def __len__(self) -> int:
        return len(self.names)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def dims(self) -> Dict[int, int]:
        return {d: len(v) for d, v in sorted(self.by_degree.items())}

    def index(self, name: str) -> int:
        return self._index[name]

    def mul(self, a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> TVector:
        out: TVector = {}
        for i, ca in a.items():
            for j, cb in b.items():
                p = self.products.get((i, j))
                if p:
                    add_into(out, p, ca * cb)
        return out

    def d(self, a: Mapping[int, Fraction]) -> TVector:
        out: TVector = {}
        for i, c in a.items():
            di = self.differential.get(i)
            if di:
                add_into(out, di, c)
        return out

    def degree_of(self, a: Mapping[int, Fraction]) -> Optional[int]:
        degs = {self.degrees[i] for i in a}
        if len(degs) > 1:
            raise DGAError("inhomogeneous element")
        return degs.pop() if degs else None

    # cochain interface
    def dim(self, k: int) -> int:
        return len(self.by_degree.get(k, ()))

    def columns(self, k: int) -> List[Vector]:
        return [self.to_vector(k + 1, self.differential.get(i, {}))
                for i in self.by_degree.get(k, ())]

    def to_vector(self, k: int, a: Mapping[int, Fraction]) -> Vector:
        out = {}
        for i, c in a.items():
            if self.degrees[i] != k:
                raise DGAError(f"{self.names[i]} is not in degree {k}")
            out[self.local[i]] = c
        return out

    def from_vector(self, k: int, vec: Mapping[int, Fraction]) -> TVector:
        basis = self.by_degree.get(k, [])
        return {basis[i]: c for i, c in sorted(vec.items())}

    # syntax
    def format(self, a: Mapping[int, Fraction]) -> str:
        return format_terms(dict(sorted(a.items())), lambda i: self.names[i])

    def parse(self, text: str) -> TVector:
        def factors(fs):
            if not fs:
                return 1, 0
            if len(fs) != 1 or fs[0] not in self._index:
                raise DGAError(f"expected one basis name, got {'*'.join(fs)!r}")
            return 1, self._index[fs[0]]
        return parse_terms(text, factors)

    def same_structure(self, other: "FiniteDGA") -> bool:
        """Equality of degrees, product tables and differentials by basis position."""
        return (self.degrees == other.degrees and self.products == other.products
                and self.differential == other.differential)

    # file format
    def to_json(self) -> dict:
        prods = {}
        for (i, j), v in sorted(self.products.items()):
            if i == 0 or j == 0 or i > j:
                continue
            prods[f"{self.names[i]}*{self.names[j]}"] = self.format(v)
        diff = {self.names[i]: self.format(v) for i, v in sorted(self.differential.items())}
        doc = {"name": self.name,
               "basis": [{"name": n, "degree": d} for n, d in zip(self.names, self.degrees)],
               "products": prods}
        if diff:
            doc["differential"] = diff
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "FiniteDGA":
        try:
            basis = [(b["name"], int(b["degree"])) for b in doc["basis"]]
        except (KeyError, TypeError) as exc:
            raise DGAError(f"malformed basis list: {exc}") from None
        shell = cls(basis)
        products = {}
        for key, val in doc.get("products", {}).items():
            left, sep, right = key.partition("*")
            if not sep or left.strip() not in shell._index or right.strip() not in shell._index:
                raise DGAError(f"malformed product key {key!r}")
            i, j = shell._index[left.strip()], shell._index[right.strip()]
            products[(i, j)] = shell.parse(str(val))
        diff = {}
        for key, val in doc.get("differential", {}).items():
            if key not in shell._index:
                raise DGAError(f"unknown basis element {key!r}")
            diff[shell._index[key]] = shell.parse(str(val))
        return cls(basis, products, diff, name=doc.get("name", ""))

    @classmethod
    def load(cls, path) -> "FiniteDGA":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


DGA = Union[FreeDGA, FiniteDGA]


# ---------------------------------------------------------------- validation

@dataclass
class Violation:
    kind: str
    witness: str
    detail: str = ""


@dataclass
class ValidationReport:
    ok: bool
    violations: List[Violation] = field(default_factory=list)
    checked: List[str] = field(default_factory=list)

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def raise_if_invalid(self) -> None:
        if not self.ok:
            v = self.first
            raise DGAError(f"{v.kind} violated at {v.witness}: {v.detail}")


def _validate_free(dga: FreeDGA, samples: int, seed: int) -> ValidationReport:
    alg = dga.algebra
    bad: List[Violation] = []
    for p, g in enumerate(alg.generators):
        dv = dga.d_generator(p)
        degs = {alg.mono_degree(m) for m in dv}
        if degs and degs != {g.degree + 1}:
            bad.append(Violation("degree", g.name, f"d({g.name}) has degrees {sorted(degs)}"))
    for p, g in enumerate(alg.generators):
        dd = dga.d_terms(dga.d_generator(p))
        if dd:
            bad.append(Violation("d_squared", g.name,
                                 f"d(d({g.name})) = {format_terms(dd, alg.format_monomial)}"))
    for p, g in enumerate(alg.generators):
        late = [q for m in dga.d_generator(p) for q, _ in m if q >= p]
        if late:
            bad.append(Violation("triangular", g.name,
                                 f"d({g.name}) involves {alg.generators[min(late)].name}"))
    # the derivation extension is Leibniz by construction; spot-check it
    rng = random.Random(seed)
    top = max(alg.degrees, default=0)
    pool = [m for k in range(top + 1) for m in alg.monomial_basis(k)][:400]
    for _ in range(samples if len(pool) > 1 else 0):
        a, b = rng.choice(pool), rng.choice(pool)
        lhs = dga.d_terms(mul_terms(alg, {a: Fraction(1)}, {b: Fraction(1)}))
        sign = -1 if alg.mono_degree(a) % 2 else 1
        rhs = mul_terms(alg, dga.d_mono(a), {b: Fraction(1)})
        add_into(rhs, mul_terms(alg, {a: Fraction(1)}, dga.d_mono(b)), sign)
        if lhs != rhs:
            bad.append(Violation("leibniz", f"({alg.format_monomial(a)}, {alg.format_monomial(b)})"))
            break
    return ValidationReport(not bad, bad, ["degree", "d_squared", "triangular", "leibniz"])


def _validate_finite(A: FiniteDGA) -> ValidationReport:
    bad: List[Violation] = []
    n = len(A)
    deg = A.degrees
    nm = A.names
    if A.dim(0) != 1:
        bad.append(Violation("connected", "degree 0", f"dim A^0 = {A.dim(0)}"))
    for (i, j), v in A.products.items():
        for k in v:
            if deg[k] != deg[i] + deg[j]:
                bad.append(Violation("degree", f"({nm[i]}, {nm[j]})",
                                     f"product lands in {nm[k]} of degree {deg[k]}"))
    for i, v in A.differential.items():
        for k in v:
            if deg[k] != deg[i] + 1:
                bad.append(Violation("degree", nm[i], f"d({nm[i]}) has a term {nm[k]}"))
    for i in range(n):
        dd = A.d(A.differential.get(i, {}))
        if dd:
            bad.append(Violation("d_squared", nm[i], f"d(d({nm[i]})) = {A.format(dd)}"))
    for i in range(n):
        for j in range(i + 1, n):
            s = -1 if deg[i] % 2 and deg[j] % 2 else 1
            ab = A.products.get((i, j), {})
            ba = {k: s * c for k, c in A.products.get((j, i), {}).items()}
            if ab != ba:
                bad.append(Violation("commutative", f"({nm[i]}, {nm[j]})"))
        if deg[i] % 2 and A.products.get((i, i)):
            bad.append(Violation("commutative", f"({nm[i]}, {nm[i]})", "odd square is nonzero"))
    unit = {i: Fraction(1) for i in range(1)}
    for i in range(n):
        for j in range(n):
            bi, bj = {i: Fraction(1)}, {j: Fraction(1)}
            for k in range(n):
                if deg[i] + deg[j] + deg[k] > A.top_degree:
                    continue
                bk = {k: Fraction(1)}
                if A.mul(A.mul(bi, bj), bk) != A.mul(bi, A.mul(bj, bk)):
                    bad.append(Violation("associative", f"({nm[i]}, {nm[j]}, {nm[k]})"))
            lhs = A.d(A.mul(bi, bj))
            rhs = A.mul(A.d(bi), bj)
            add_into(rhs, A.mul(bi, A.d(bj)), -1 if deg[i] % 2 else 1)
            if lhs != rhs:
                bad.append(Violation("leibniz", f"({nm[i]}, {nm[j]})"))
    if A.d(unit):
        bad.append(Violation("unit", nm[0], "d(1) != 0"))
    return ValidationReport(not bad, bad, ["connected", "degree", "d_squared", "commutative",
                                           "associative", "leibniz"])


def validate_dga(dga: DGA, samples: int = 50, seed: int = 0) -> ValidationReport:
    """Check the DGA axioms; every violation found is reported, in check order."""
    if isinstance(dga, FreeDGA):
        return _validate_free(dga, samples, seed)
    return _validate_finite(dga)


# ---------------------------------------------------------------- cohomology

@dataclass
class CohomologyReport:
    degree: int
    dimension: int
    representatives: List[Vector]  # cocycles, local degree-k coordinates
    coboundaries: List[Vector]  # echelon basis of the coboundary space

    def __post_init__(self) -> None:
        assert self.dimension == len(self.representatives)


def cohomology(dga: DGA, k: int) -> CohomologyReport:
    """Degree-k cohomology with echelon cocycle representatives.

    Representatives span a complement of the coboundaries inside the cocycles
    and are reduced against the coboundary echelon basis.
    """
    if k < 0:
        raise ValueError("negative degree")
    trunc = getattr(dga, "truncation", None)
    if trunc is not None and k > trunc:
        raise ValueError(f"degree {k} is above the truncation {trunc}")
    bounds = Echelon(track_history=False)
    if k > 0:
        for col in dga.columns(k - 1):
            bounds.add(col)
    cycles = solve_linear(SparseMatrix.from_columns(dga.dim(k + 1), dga.columns(k))).kernel
    quotient = Echelon(track_history=False)
    for b in bounds.basis():
        quotient.add(b)
    reps = []
    for z in cycles:
        red = quotient.reduce(z)
        if red:
            quotient.add(red)
            reps.append(red)
    return CohomologyReport(k, len(reps), reps, bounds.basis())


def betti_numbers(dga: DGA, top: int) -> List[int]:
    return [cohomology(dga, k).dimension for k in range(top + 1)]


def require_simply_connected(A: FiniteDGA) -> None:
    if cohomology(A, 0).dimension != 1:
        raise NotSimplyConnected("H^0 must be one-dimensional")
    if cohomology(A, 1).dimension != 0:
        raise NotSimplyConnected("H^1 must vanish")


# ---------------------------------------------------------------- morphisms

class Morphism:
    """A DGA morphism; subclasses say where a source basis vector goes."""

    source: DGA
    target: DGA

    def image(self, k: int, vec: Mapping[int, Fraction]) -> Vector:
        """Image of a local degree-k source vector, in local target coordinates."""
        raise NotImplementedError

    def check_chain_map(self) -> None:
        raise NotImplementedError


class FreeMorphism(Morphism):
    """Multiplicative map out of a free DGA, given on generators."""

    def __init__(self, source: FreeDGA, target: DGA, images: Mapping[int, Mapping]) -> None:
        self.source = source
        self.target = target
        self.images = {p: dict(v) for p, v in images.items() if v}
        self._cache: Dict[Monomial, Dict] = {}

    def _tmul(self, a, b):
        if isinstance(self.target, FiniteDGA):
            return self.target.mul(a, b)
        return mul_terms(self.target.algebra, a, b)

    def _one(self):
        return {0: Fraction(1)} if isinstance(self.target, FiniteDGA) else {(): Fraction(1)}

    def on_monomial(self, m: Monomial) -> Dict:
        cached = self._cache.get(m)
        if cached is None:
            if not m:
                cached = self._one()
            else:
                (p, e), rest = m[0], m[1:]
                g = self.images.get(p)
                cached = {}
                if g:
                    part = g
                    for _ in range(e - 1):
                        part = self._tmul(part, g)
                    if part:
                        cached = self._tmul(part, self.on_monomial(rest))
            self._cache[m] = cached
        return cached

    def on_terms(self, terms: Mapping[Monomial, Fraction]) -> Dict:
        out: Dict = {}
        for m, c in terms.items():
            add_into(out, self.on_monomial(m), c)
        return out

    def _tvec(self, k: int, t) -> Vector:
        if isinstance(self.target, FiniteDGA):
            return self.target.to_vector(k, t)
        return self.target.to_vector(k, t)

    def image(self, k: int, vec: Mapping[int, Fraction]) -> Vector:
        basis = self.source.algebra.monomial_basis(k)
        return self._tvec(k, self.on_terms({basis[i]: c for i, c in vec.items()}))

    def _td(self, t):
        if isinstance(self.target, FiniteDGA):
            return self.target.d(t)
        return self.target.d_terms(t)

    def check_chain_map(self) -> None:
        alg = self.source.algebra
        for p, g in enumerate(alg.generators):
            lhs = self.on_terms(self.source.d_generator(p))
            rhs = self._td(self.images.get(p, {}))
            if lhs != rhs:
                raise DGAError(f"not a chain map at generator {g.name}")


class LinearMorphism(Morphism):
    """A map between finite DGAs given on every basis vector."""

    def __init__(self, source: FiniteDGA, target: FiniteDGA,
                 images: Mapping[int, Mapping[int, Fraction]]) -> None:
        self.source = source
        self.target = target
        self.images = {i: dict(v) for i, v in images.items() if v}

    @classmethod
    def identity(cls, A: FiniteDGA) -> "LinearMorphism":
        return cls(A, A, {i: {i: Fraction(1)} for i in range(len(A))})

    def apply(self, a: Mapping[int, Fraction]) -> TVector:
        out: TVector = {}
        for i, c in a.items():
            add_into(out, self.images.get(i, {}), c)
        return out

    def image(self, k: int, vec: Mapping[int, Fraction]) -> Vector:
        return self.target.to_vector(k, self.apply(self.source.from_vector(k, vec)))

    def check_chain_map(self) -> None:
        S = self.source
        for i in range(len(S)):
            if self.apply(S.d({i: Fraction(1)})) != self.target.d(self.images.get(i, {})):
                raise DGAError(f"not a chain map at basis element {S.names[i]}")


@dataclass
class InducedMap:
    degree: int
    matrix: List[List[Fraction]]  # rows: target classes, columns: source classes
    rank: int
    source_dim: int
    target_dim: int

    @property
    def is_isomorphism(self) -> bool:
        return self.source_dim == self.target_dim == self.rank


def induced_map_on_cohomology(f: Morphism, k: int,
                              source_report: Optional[CohomologyReport] = None,
                              target_report: Optional[CohomologyReport] = None) -> InducedMap:
    """Matrix of H^k(f) in the representative bases of both sides."""
    f.check_chain_map()
    hs = source_report or cohomology(f.source, k)
    ht = target_report or cohomology(f.target, k)
    ech = Echelon()
    for r in ht.representatives:
        ech.add(r)
    for b in ht.coboundaries:
        ech.add(b)
    nt = ht.dimension
    matrix = [[Fraction(0)] * hs.dimension for _ in range(nt)]
    for j, z in enumerate(hs.representatives):
        coords = ech.coordinates(f.image(k, z))
        if coords is None:
            raise DGAError(f"image of class {j} in degree {k} is not a cocycle")
        for i, c in coords.items():
            if i < nt:
                matrix[i][j] = c
    rank = solve_linear(SparseMatrix.from_rows(matrix)).rank if nt and hs.dimension else 0
    return InducedMap(k, matrix, rank, hs.dimension, nt)
