"""Free graded-commutative algebras over Q.

A monomial is a tuple of ``(position, exponent)`` pairs sorted by position,
where positions index the algebra's generators in (degree, id) order.  Odd
generators never carry an exponent above 1.  Element terms are stored as
``dict[Monomial, Fraction]`` with no zero coefficients.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[Tuple[int, int], ...]
Terms = Dict[Monomial, Fraction]

UNIT: Monomial = ()


@dataclass(frozen=True, order=True)
class Generator:
    degree: int
    id: int
    name: str

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError(f"generator {self.name} must have positive degree")


class FreeGradedAlgebra:
    """The free graded-commutative algebra on a finite set of generators."""

    def __init__(self, generators: Iterable[Generator]) -> None:
        gens = tuple(sorted(generators))
        ids = [g.id for g in gens]
        if len(set(ids)) != len(ids):
            raise ValueError("generator ids must be unique")
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators: Tuple[Generator, ...] = gens
        self.degrees: Tuple[int, ...] = tuple(g.degree for g in gens)
        self.odd: Tuple[bool, ...] = tuple(g.degree % 2 == 1 for g in gens)
        self._by_name = {g.name: i for i, g in enumerate(gens)}
        self._basis_cache: Dict[int, Tuple[Monomial, ...]] = {}
        self._suffixes = lru_cache(maxsize=None)(self._suffixes_uncached)

    @classmethod
    def from_degrees(cls, degrees: Mapping[str, int]) -> "FreeGradedAlgebra":
        """``FreeGradedAlgebra.from_degrees({"x": 2, "y": 3})``"""
        return cls(Generator(d, i, n) for i, (n, d) in enumerate(degrees.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{g.name}_{g.degree}" for g in self.generators)
        return f"Λ({inner})"

    def __len__(self) -> int:
        return len(self.generators)

    def is_extension_of(self, other: "FreeGradedAlgebra") -> bool:
        n = len(other.generators)
        return self is other or self.generators[:n] == other.generators

    def extend(self, new: Iterable[Generator]) -> "FreeGradedAlgebra":
        """A larger algebra whose first generators are exactly ours.

        Keeps positions stable so monomials of ``self`` stay valid.
        """
        new = sorted(new)
        if new and self.generators and new[0] < self.generators[-1]:
            raise ValueError("new generators must sort after existing ones")
        return FreeGradedAlgebra(self.generators + tuple(new))

    def position(self, name: str) -> int:
        return self._by_name[name]

    def gen(self, name: str) -> "Element":
        return Element(self, {((self._by_name[name], 1),): Fraction(1)})

    def one(self) -> "Element":
        return Element(self, {UNIT: Fraction(1)})

    def zero(self) -> "Element":
        return Element(self, {})

    def mono_degree(self, m: Monomial) -> int:
        deg = self.degrees
        return sum(e * deg[p] for p, e in m)

    def mono_mul(self, a: Monomial, b: Monomial) -> Optional[Tuple[int, Monomial]]:
        """Canonical form of a*b as (sign, monomial); None if it vanishes."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        odd = self.odd
        a_odd = sum(1 for p, _ in a if odd[p])
        out = []
        parity = 0
        i = j = 0
        la, lb = len(a), len(b)
        while i < la and j < lb:
            pa, ea = a[i]
            pb, eb = b[j]
            if pa < pb:
                out.append(a[i])
                if odd[pa]:
                    a_odd -= 1
                i += 1
            elif pb < pa:
                out.append(b[j])
                if odd[pb]:
                    parity += a_odd
                j += 1
            else:
                if odd[pa]:
                    return None
                out.append((pa, ea + eb))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return (-1 if parity % 2 else 1), tuple(out)

    def _suffixes_uncached(self, start: int, rem: int) -> Tuple[Monomial, ...]:
        if rem == 0:
            return (UNIT,)
        out: List[Monomial] = []
        deg = self.degrees
        for p in range(start, len(deg)):
            d = deg[p]
            if d > rem:
                break
            top = 1 if self.odd[p] else rem // d
            for e in range(top, 0, -1):
                for m in self._suffixes(p + 1, rem - e * d):
                    out.append(((p, e),) + m)
        return tuple(out)

    def monomial_basis(self, degree: int) -> Tuple[Monomial, ...]:
        """All monomials of the given degree, lex-descending on exponent vectors."""
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        cached = self._basis_cache.get(degree)
        if cached is None:
            cached = self._suffixes(0, degree)
            self._basis_cache[degree] = cached
        return cached

    def basis_index(self, degree: int) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomial_basis(degree))}

    def format_monomial(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for p, e in m:
            name = self.generators[p].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def parse(self, text: str) -> "Element":
        """Parse canonical element syntax such as ``3/2*x^2*y - z``."""
        return Element(self, parse_terms(text, self._parse_monomial))

    def _parse_monomial(self, factors: Sequence[str]) -> Tuple[int, Monomial]:
        sign, mono = 1, UNIT
        for f in factors:
            name, _, exp = f.partition("^")
            if name not in self._by_name:
                raise ValueError(f"unknown generator {name!r}")
            p = self._by_name[name]
            for _ in range(int(exp) if exp else 1):
                r = self.mono_mul(mono, ((p, 1),))
                if r is None:
                    return 0, UNIT
                sign *= r[0]
                mono = r[1]
        return sign, mono


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_terms(text: str, parse_factors) -> Terms:
    """Shared parser for ``coef*a*b^2 - c`` style sums."""
    text = text.strip()
    out: Terms = {}
    if text in ("", "0"):
        return out
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        factors = []
        for tok in (t.strip() for t in m.group(2).split("*")):
            if not tok:
                raise ValueError(f"empty factor in {text!r}")
            if re.fullmatch(r"\d+(/\d+)?", tok):
                coef *= Fraction(tok)
            else:
                factors.append(tok)
        s, mono = parse_factors(factors)
        if s == 0:
            continue
        v = out.get(mono, 0) + s * coef
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def format_terms(terms: Mapping, fmt_key) -> str:
    if not terms:
        return "0"
    pieces = []
    for key, c in terms.items():
        body = fmt_key(key)
        mag = abs(c)
        if body == "1":
            txt = str(mag)
        elif mag == 1:
            txt = body
        else:
            txt = f"{mag}*{body}"
        if not pieces:
            pieces.append(txt if c > 0 else f"-{txt}")
        else:
            pieces.append(f"+ {txt}" if c > 0 else f"- {txt}")
    return " ".join(pieces)


def add_into(acc: Dict, terms: Mapping, scale=1) -> Dict:
    for k, c in terms.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def mul_terms(alg: FreeGradedAlgebra, a: Mapping[Monomial, Fraction],
              b: Mapping[Monomial, Fraction]) -> Terms:
    out: Terms = {}
    mul = alg.mono_mul
    for ma, ca in a.items():
        for mb, cb in b.items():
            r = mul(ma, mb)
            if r is None:
                continue
            s, m = r
            v = out.get(m, 0) + s * ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


class Element:
    """A homogeneous element of a free graded-commutative algebra."""

    __slots__ = ("algebra", "terms", "degree")

    def __init__(self, algebra: FreeGradedAlgebra, terms: Mapping[Monomial, object]) -> None:
        clean = {m: Fraction(c) for m, c in terms.items() if c}
        degs = {algebra.mono_degree(m) for m in clean}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element (degrees {sorted(degs)})")
        self.algebra = algebra
        self.terms: Terms = dict(sorted(clean.items()))
        self.degree: Optional[int] = degs.pop() if degs else None

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.algebra is not self.algebra:
            raise ValueError("operands belong to different algebras")

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, add_into(dict(self.terms), other.terms))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, add_into(dict(self.terms), other.terms, -1))

    def __neg__(self) -> "Element":
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            return Element(self.algebra, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        return Element(self.algebra, mul_terms(self.algebra, self.terms, other.terms))

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        return (isinstance(other, Element) and other.algebra is self.algebra
                and other.terms == self.terms)

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __str__(self) -> str:
        return format_terms(self.terms, self.algebra.format_monomial)

    def __repr__(self) -> str:
        return f"Element({self})"


def multiply(a: Element, b: Element) -> Element:
    return a * b


def monomial_basis(algebra: FreeGradedAlgebra, degree: int) -> Tuple[Monomial, ...]:
    return algebra.monomial_basis(degree)


def basis_counts(degrees: Sequence[int], top: int) -> List[int]:
    """Coefficients of prod_even 1/(1-t^d) * prod_odd (1+t^d) up to t^top."""
    s = [0] * (top + 1)
    s[0] = 1
    for d in degrees:
        if d % 2:
            for i in range(top, d - 1, -1):
                s[i] += s[i - d]
        else:
            for i in range(d, top + 1):
                s[i] += s[i - d]
    return s
