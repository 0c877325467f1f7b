"""Elliptic / hyperbolic classification from rank sequences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .minimal_model import RankSequence
from .spaces import BettiData

ELLIPTIC = "Elliptic"
HYPERBOLIC = "Hyperbolic"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CatBound:
    value: int
    source: str = "user-supplied"  # or "4-manifold default", "half-dimension default"

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError("cat bound must be >= 1")

    @classmethod
    def default_for(cls, formal_dimension: int) -> "CatBound":
        # simply connected n-dimensional complexes have cat <= n/2
        if formal_dimension == 4:
            return cls(2, "4-manifold default")
        return cls(max(1, formal_dimension // 2), "half-dimension default")


@dataclass
class Witness:
    rule: str  # "even_total", "odd_total", "euler", "stabilized"
    degree: Optional[int]
    lhs: int
    rhs: int
    text: str

    def recheck(self, ranks: RankSequence, betti: BettiData) -> bool:
        """Re-derive the witness arithmetic from the raw data."""
        if self.rule in ("even_total", "odd_total"):
            parity = 0 if self.rule == "even_total" else 1
            total = sum(r for k, r in enumerate(ranks.ranks) if k <= self.degree and k % 2 == parity)
            return total == self.lhs and total > self.rhs
        if self.rule == "euler":
            return euler_characteristic(betti) == self.lhs < 0
        return True


@dataclass
class Growth:
    cumulative: List[int]
    ratios: List[Optional[Fraction]]  # ratios[k] = s_k / s_{k-2}, None if undefined
    strictly_increasing_from: Optional[int]
    flag: str  # "finite", "growing", "undetermined"

    def as_dict(self) -> dict:
        return {"cumulative": self.cumulative,
                "ratios": [None if r is None else str(r) for r in self.ratios],
                "strictly_increasing_from": self.strictly_increasing_from,
                "flag": self.flag}


@dataclass
class DichotomyVerdict:
    verdict: str
    witness: Witness
    cat: CatBound
    growth: Growth
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        w = self.witness
        return {"verdict": self.verdict,
                "witness": {"rule": w.rule, "degree": w.degree, "lhs": w.lhs, "rhs": w.rhs,
                            "text": w.text},
                "cat": {"value": self.cat.value, "source": self.cat.source},
                "growth": self.growth.as_dict(),
                "notes": self.notes}


def euler_characteristic(betti: BettiData) -> int:
    return sum((-1) ** k * b for k, b in enumerate(betti.numbers))


def growth_report(ranks: RankSequence) -> Growth:
    s = []
    acc = 0
    for r in ranks.ranks:
        acc += r
        s.append(acc)
    ratios: List[Optional[Fraction]] = [None, None]
    for k in range(2, len(s)):
        ratios.append(Fraction(s[k], s[k - 2]) if s[k - 2] else None)
    start = None
    for k in range(1, len(s)):
        if all(s[j] > s[j - 1] for j in range(k, len(s))):
            start = k
            break
    N = ranks.truncation
    if acc == 0 or (N >= 2 and s[N] == s[N - 2]):
        flag = "finite"
    elif start is not None and all(r is None or r > 1 for r in ratios):
        flag = "growing"
    else:
        flag = "undetermined"
    return Growth(s, ratios, start, flag)


def classify(ranks: RankSequence, betti: BettiData, cat: Optional[CatBound] = None) -> DichotomyVerdict:
    n = ranks.formal_dimension
    N = ranks.truncation
    if N < n:
        raise ValueError(f"truncation {N} is below the formal dimension {n}")
    cat = cat or CatBound.default_for(n)
    growth = growth_report(ranks)
    chi = euler_characteristic(betti)

    even = odd = 0
    for k, r in enumerate(ranks.ranks):
        if k % 2:
            odd += r
        else:
            even += r
        if even > cat.value:
            w = Witness("even_total", k, even, cat.value,
                        f"dim π_even = {even} > cat = {cat.value} (cumulative through degree {k})")
            return DichotomyVerdict(HYPERBOLIC, w, cat, growth)
        if odd > cat.value:
            w = Witness("odd_total", k, odd, cat.value,
                        f"dim π_odd = {odd} > cat = {cat.value} (cumulative through degree {k})")
            return DichotomyVerdict(HYPERBOLIC, w, cat, growth)
    if chi < 0:
        w = Witness("euler", None, chi, 0, f"χ = {chi} < 0")
        return DichotomyVerdict(HYPERBOLIC, w, cat, growth)

    # elliptic spaces of formal dimension n have generators only in degrees <= 2n - 1
    tail = sum(ranks.ranks[2 * n:])
    if N >= 2 * n and tail == 0 and even <= odd <= cat.value:
        w = Witness("stabilized", N, even, odd,
                    f"no generators in [{2 * n}, {N}]; dim π_even = {even} ≤ dim π_odd = {odd} "
                    f"≤ cat = {cat.value}")
        return DichotomyVerdict(ELLIPTIC, w, cat, growth,
                                ["stabilization heuristic: elliptic spaces have no rational "
                                 "homotopy in degrees >= twice the formal dimension"])
    if N < 2 * n:
        reason = f"truncation {N} < 2·{n}; cannot certify stabilization"
    elif tail:
        reason = f"{tail} generators in degrees >= {2 * n} without exceeding cat = {cat.value}"
    else:
        reason = f"dim π_even = {even} > dim π_odd = {odd}"
    w = Witness("inconclusive", None, even, odd, reason)
    return DichotomyVerdict(INCONCLUSIVE, w, cat, growth)
