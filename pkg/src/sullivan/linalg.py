"""Sparse exact linear algebra over the rationals.

Vectors are plain ``dict[int, Fraction]`` (index -> nonzero coefficient).
Elimination is done column by column on integer-scaled copies (fraction-free,
with content removal after every step); results are handed back as
``Fraction`` vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Vector = Dict[int, Fraction]


class DimensionError(ValueError):
    pass


def _to_integer(vec: Mapping[int, object]) -> Tuple[Dict[int, int], int]:
    """Scale a rational vector to integers; returns (int vector, scale)."""
    fr = {i: Fraction(c) for i, c in vec.items() if c}
    scale = 1
    for c in fr.values():
        if c.denominator != 1:
            scale = lcm(scale, c.denominator)
    return {i: int(c * scale) for i, c in fr.items()}, scale


def _content(*vecs: Mapping[int, int]) -> int:
    g = 0
    for v in vecs:
        for c in v.values():
            g = gcd(g, c)
            if g == 1:
                return 1
    return g


def _axpy(a: int, x: Dict[int, int], b: int, y: Mapping[int, int]) -> Dict[int, int]:
    """a*x - b*y, dropping zeros (x is consumed)."""
    if a != 1:
        for i in x:
            x[i] *= a
    for i, c in y.items():
        v = x.get(i, 0) - b * c
        if v:
            x[i] = v
        else:
            x.pop(i, None)
    return x


def _to_fraction(vec: Mapping[int, int], denom: int = 1) -> Vector:
    return {i: Fraction(c, denom) for i, c in sorted(vec.items())}


class Echelon:
    """An incrementally built echelon basis of a subspace.

    Each stored vector has a distinct pivot (its largest index).  Every stored
    vector also records how it was obtained as a combination of the vectors
    that were offered to :meth:`add`, so membership tests can return explicit
    coefficients.
    """

    def __init__(self, track_history: bool = True) -> None:
        self._pivots: Dict[int, Tuple[Dict[int, int], Dict[int, int]]] = {}
        self._offered = 0
        self.track_history = track_history

    def __len__(self) -> int:
        return len(self._pivots)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._pivots)

    def _reduce(self, vec: Dict[int, int], hist: Dict[int, int], scale: int):
        # invariant: vec == scale*original - sum(hist[j]*offered_j)
        pivots = self._pivots
        while vec:
            low = max(vec)
            entry = pivots.get(low)
            if entry is None:
                break
            pvec, phist = entry
            a = pvec[low]
            b = vec[low]
            g = gcd(a, b)
            a //= g
            b //= g
            vec = _axpy(a, vec, b, pvec)
            if not phist:
                scale *= a
                g = gcd(_content(vec), scale)
                if g > 1:
                    vec = {i: c // g for i, c in vec.items()}
                    scale //= g
                continue
            if a != 1:
                for i in hist:
                    hist[i] *= a
            for i, c in phist.items():
                v = hist.get(i, 0) + b * c
                if v:
                    hist[i] = v
                else:
                    hist.pop(i, None)
            scale *= a
            g = gcd(_content(vec, hist), scale)
            if g > 1:
                vec = {i: c // g for i, c in vec.items()}
                hist = {i: c // g for i, c in hist.items()}
                scale //= g
        return vec, hist, scale

    def add(self, vec: Mapping[int, object]) -> Optional[Vector]:
        """Offer a vector.

        Returns None if it was independent of the current span, otherwise the
        dependency: coefficients c_j (over previously offered vectors, by offer
        index) with ``vec == sum c_j * offered_j``.
        """
        ivec, scale = _to_integer(vec)
        idx = self._offered
        self._offered += 1
        red, hist, s = self._reduce(ivec, {}, scale)
        if red:
            # red == s*offered[idx] - sum(hist[j]*offered[j])
            if self.track_history:
                hist = {i: -c for i, c in hist.items()}
                hist[idx] = s
            self._pivots[max(red)] = (red, hist)
            return None
        return {i: Fraction(c, s) for i, c in sorted(hist.items()) if c}

    def reduce(self, vec: Mapping[int, object]) -> Vector:
        """Remainder of ``vec`` after elimination against the basis (a scalar
        multiple of the remainder; zero iff ``vec`` is in the span)."""
        ivec, scale = _to_integer(vec)
        red, _, s = self._reduce(ivec, {}, scale)
        return {i: Fraction(c, s) for i, c in sorted(red.items())}

    def contains(self, vec: Mapping[int, object]) -> bool:
        ivec, scale = _to_integer(vec)
        red, _, _ = self._reduce(ivec, {}, scale)
        return not red

    def coordinates(self, vec: Mapping[int, object]) -> Optional[Vector]:
        """Coefficients over the offered vectors expressing ``vec``, or None."""
        if not self.track_history:
            raise ValueError("coordinates need track_history=True")
        ivec, scale = _to_integer(vec)
        red, hist, s = self._reduce(ivec, {}, scale)
        if red:
            return None
        return {i: Fraction(c, s) for i, c in sorted(hist.items()) if c}

    def basis(self) -> List[Vector]:
        """Stored vectors normalized to pivot coefficient 1, by pivot."""
        out = []
        for low in sorted(self._pivots):
            vec = self._pivots[low][0]
            out.append(_to_fraction(vec, 1) if vec[low] == 1 else
                       {i: Fraction(c, vec[low]) for i, c in sorted(vec.items())})
        return out


@dataclass(frozen=True)
class SparseMatrix:
    """Column-major sparse matrix; ``columns[j]`` maps row index -> entry."""

    nrows: int
    ncols: int
    columns: Tuple[Mapping[int, object], ...]

    def __post_init__(self) -> None:
        if len(self.columns) != self.ncols:
            raise DimensionError(f"expected {self.ncols} columns, got {len(self.columns)}")
        for j, col in enumerate(self.columns):
            for i in col:
                if not 0 <= i < self.nrows:
                    raise DimensionError(f"row index {i} out of range in column {j}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        cols = tuple({i: Fraction(rows[i][j]) for i in range(nrows) if rows[i][j]}
                     for j in range(ncols))
        return cls(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[Mapping[int, object]]) -> "SparseMatrix":
        cols = tuple(columns)
        return cls(nrows, len(cols), cols)

    def apply(self, x: Mapping[int, object]) -> Vector:
        out: Dict[int, Fraction] = {}
        for j, c in x.items():
            if not 0 <= j < self.ncols:
                raise DimensionError(f"index {j} out of range")
            for i, a in self.columns[j].items():
                v = out.get(i, 0) + Fraction(a) * Fraction(c)
                if v:
                    out[i] = v
                else:
                    out.pop(i, None)
        return dict(sorted(out.items()))


@dataclass
class LinearSolution:
    matrix: SparseMatrix
    rank: int
    kernel: List[Vector]
    image: List[Vector]
    _echelon: Echelon = field(repr=False)

    def preimage(self, b: Mapping[int, object]) -> Optional[Vector]:
        """Some x with ``matrix @ x == b``, or None if b is not in the image."""
        for i in b:
            if not 0 <= i < self.matrix.nrows:
                raise DimensionError(f"row index {i} out of range")
        return self._echelon.coordinates(b)


def solve_linear(matrix: SparseMatrix) -> LinearSolution:
    """Rank, kernel basis, echelon image basis and a preimage solver."""
    ech = Echelon()
    kernel = []
    for col in matrix.columns:
        dep = ech.add(col)
        if dep is not None:
            j = ech._offered - 1
            vec = {i: -c for i, c in dep.items()}
            vec[j] = Fraction(1)
            kernel.append(dict(sorted(vec.items())))
    return LinearSolution(matrix, len(ech), kernel, ech.basis(), ech)
