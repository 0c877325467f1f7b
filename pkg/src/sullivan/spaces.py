"""Cohomology rings of standard simply connected spaces, as FiniteDGA targets."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from sympy import Matrix

from .dga import DGAError, FiniteDGA, cohomology, validate_dga


@dataclass(frozen=True)
class IntersectionForm:
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        m = self.matrix
        n = len(m)
        if any(len(row) != n for row in m):
            raise DGAError("intersection form must be square")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise DGAError("intersection form must be symmetric")
        if n and Matrix(m).det() == 0:
            raise DGAError("intersection form is degenerate (violates Poincaré duality)")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntersectionForm":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def diag(cls, *entries: int) -> "IntersectionForm":
        n = len(entries)
        return cls.of([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def b2(self) -> int:
        return len(self.matrix)

    def signature(self) -> int:
        eig = Matrix(self.matrix).eigenvals()
        return sum(mult * (1 if ev > 0 else -1) for ev, mult in eig.items())


@dataclass(frozen=True)
class BettiData:
    numbers: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.numbers or self.numbers[0] != 1:
            raise ValueError("b0 must be 1")
        if len(self.numbers) > 1 and self.numbers[1] != 0:
            raise ValueError("b1 must vanish (simply connected scope)")

    @classmethod
    def of(cls, A: FiniteDGA) -> "BettiData":
        return cls(tuple(cohomology(A, k).dimension for k in range(A.top_degree + 1)))

    @property
    def formal_dimension(self) -> int:
        return max(k for k, b in enumerate(self.numbers) if b)


def _checked(A: FiniteDGA) -> FiniteDGA:
    validate_dga(A).raise_if_invalid()
    return A


def four_manifold(form: IntersectionForm, name: str = "") -> FiniteDGA:
    n = form.b2
    basis = [("1", 0)] + [(f"x{i + 1}", 2) for i in range(n)] + [("vol", 4)]
    vol = n + 1
    products = {}
    for i in range(n):
        for j in range(i, n):
            q = form.matrix[i][j]
            if q:
                products[(i + 1, j + 1)] = {vol: Fraction(q)}
    return _checked(FiniteDGA(basis, products, name=name or f"M{list(map(list, form.matrix))}"))


def sphere(n: int) -> FiniteDGA:
    if n <= 1:
        raise DGAError("only spheres of dimension >= 2 are simply connected")
    return _checked(FiniteDGA([("1", 0), ("e", n)], name=f"S{n}"))


def truncated_polynomial(degree: int, height: int, name: str = "") -> FiniteDGA:
    """Q[ξ]/ξ^{height+1} with ξ of the given even degree."""
    if degree < 2 or degree % 2:
        raise DGAError("truncated polynomial generator needs even degree >= 2")
    if height < 1:
        raise DGAError("height must be >= 1")
    basis = [("1", 0)] + [("xi" if i == 1 else f"xi{i}", degree * i)
                          for i in range(1, height + 1)]
    products = {(i, j): {i + j: 1} for i in range(1, height + 1) for j in range(i, height + 1)
                if i + j <= height}
    return _checked(FiniteDGA(basis, products, name=name or f"Q[xi_{degree}]/xi^{height + 1}"))


def projective(n: int) -> FiniteDGA:
    """H*(CP^n) = Q[ξ]/ξ^{n+1}."""
    if n < 1:
        raise DGAError("CP^n needs n >= 1")
    return truncated_polynomial(2, n, name=f"CP{n}")


def product(A: FiniteDGA, B: FiniteDGA) -> FiniteDGA:
    """Graded tensor product, basis ordered by (degree, a, b)."""
    pairs = sorted(((A.degrees[a] + B.degrees[b], a, b)
                    for a in range(len(A)) for b in range(len(B))))
    index = {(a, b): i for i, (_, a, b) in enumerate(pairs)}

    clash = set(A.names[1:]) & set(B.names[1:])
    right = [n + "'" if n in clash else n for n in B.names]

    def name(a, b):
        if a == 0:
            return right[b] if b else "1"
        return A.names[a] if b == 0 else f"{A.names[a]}.{right[b]}"

    basis = [(name(a, b), d) for d, a, b in pairs]
    products: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for (a1, b1), i in index.items():
        for (a2, b2), j in index.items():
            pa = A.products.get((a1, a2))
            pb = B.products.get((b1, b2))
            if not pa or not pb:
                continue
            sign = -1 if B.degrees[b1] % 2 and A.degrees[a2] % 2 else 1
            out: Dict[int, Fraction] = {}
            for ka, ca in pa.items():
                for kb, cb in pb.items():
                    k = index[(ka, kb)]
                    out[k] = out.get(k, 0) + sign * ca * cb
            out = {k: c for k, c in out.items() if c}
            if out:
                products[(i, j)] = out
    diff: Dict[int, Dict[int, Fraction]] = {}
    for (a, b), i in index.items():
        out = {}
        for ka, c in A.differential.get(a, {}).items():
            out[index[(ka, b)]] = out.get(index[(ka, b)], 0) + c
        sign = -1 if A.degrees[a] % 2 else 1
        for kb, c in B.differential.get(b, {}).items():
            out[index[(a, kb)]] = out.get(index[(a, kb)], 0) + sign * c
        out = {k: c for k, c in out.items() if c}
        if out:
            diff[i] = out
    return _checked(FiniteDGA(basis, products, diff, name=f"{A.name}x{B.name}"))


def block_diagonal(f: IntersectionForm, g: IntersectionForm) -> IntersectionForm:
    n, m = f.b2, g.b2
    rows = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = f.matrix[i][j]
    for i in range(m):
        for j in range(m):
            rows[n + i][n + j] = g.matrix[i][j]
    return IntersectionForm.of(rows)


def connected_sum_4d(f: IntersectionForm, g: IntersectionForm) -> FiniteDGA:
    return four_manifold(block_diagonal(f, g))


# ------------------------------------------------------------------ presets

NAMED_FORMS = {
    "CP2": IntersectionForm.diag(1),
    "S2xS2": IntersectionForm.of([[0, 1], [1, 0]]),
    "3CP2": IntersectionForm.diag(1, 1, 1),
}


def parse_form(text: str) -> IntersectionForm:
    """``diag(1,1,-1)``, ``[[0,1],[1,0]]`` / ``0,1;1,0`` rows, or a named preset."""
    t = text.strip()
    if t in NAMED_FORMS:
        return NAMED_FORMS[t]
    m = re.fullmatch(r"diag\(([-\d,\s]+)\)", t)
    if m:
        return IntersectionForm.diag(*(int(x) for x in m.group(1).split(",")))
    if t.startswith("["):
        rows = re.findall(r"\[([-\d,\s]+)\]", t[1:-1])
        return IntersectionForm.of([[int(x) for x in r.split(",")] for r in rows])
    if ";" in t or "," in t:
        return IntersectionForm.of([[int(x) for x in r.split(",")] for r in t.split(";")])
    raise DGAError(f"cannot parse intersection form {text!r}")


def preset(name: str) -> FiniteDGA:
    """Named targets: S<n>, CP<n>, S2xS2, 3CP2, <k>CP2, diag(...), explicit forms."""
    t = name.strip()
    m = re.fullmatch(r"S(\d+)", t)
    if m:
        return sphere(int(m.group(1)))
    m = re.fullmatch(r"CP(\d+)", t)
    if m and t != "CP2":
        return projective(int(m.group(1)))
    m = re.fullmatch(r"HP(\d+)", t)
    if m:
        return truncated_polynomial(4, int(m.group(1)), name=t)
    m = re.fullmatch(r"(\d+)CP2", t)
    if m:
        return four_manifold(IntersectionForm.diag(*([1] * int(m.group(1)))), name=t)
    try:
        form = parse_form(t)
    except DGAError:
        raise DGAError(f"unknown preset {name!r}") from None
    return four_manifold(form, name=t)


def form_of_preset(name: str):
    """The intersection form behind a 4-manifold preset, or None."""
    t = name.strip()
    m = re.fullmatch(r"(\d+)CP2", t)
    if m:
        return IntersectionForm.diag(*([1] * int(m.group(1))))
    try:
        return parse_form(t)
    except DGAError:
        return None


def list_presets() -> List[str]:
    return ["S2", "S3", "S<n>", "CP2", "CP<n>", "S2xS2", "3CP2", "<k>CP2", "diag(...)"]
