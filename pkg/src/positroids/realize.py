"""
Exact-rational realization oracle: from a matrix over Q to its matroid,
positivity verdict, and bounded affine permutation.

Everything here is exact Fraction arithmetic; sign-of-minor decisions are
the whole point, so no floating point appears anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import BoundedAffinePermutation
from .geometry import TooLarge


class NotFullRank(ValueError):
    pass


class NotNonNegative(ValueError):
    pass


@dataclass(frozen=True)
class RationalMatrix:
    """A k x n matrix of exact rationals, k <= n, columns indexed by [n]."""

    k: int
    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.k > self.n:
            raise ValueError(f"need k <= n, got k={self.k}, n={self.n}")
        if len(self.entries) != self.k or any(
            len(row) != self.n for row in self.entries
        ):
            raise ValueError("entry grid does not match declared shape")

    def column(self, j: int) -> tuple[Fraction, ...]:
        """Column j for j in [1, n]."""
        return tuple(row[j - 1] for row in self.entries)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        return cls(len(entries), len(entries[0]) if entries else 0, entries)

    @classmethod
    def from_json(cls, obj: dict) -> "RationalMatrix":
        entries = tuple(
            tuple(Fraction(str(x)) for x in row) for row in obj["entries"]
        )
        m = cls(int(obj["k"]), int(obj["n"]), entries)
        return m


def _det(columns: list[tuple[Fraction, ...]]) -> Fraction:
    """Determinant of the square matrix with the given columns, by elimination."""
    k = len(columns)
    m = [[columns[j][i] for j in range(k)] for i in range(k)]
    det = Fraction(1)
    for c in range(k):
        pivot_row = next((r for r in range(c, k) if m[r][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, k):
            factor = m[r][c] * inv
            if factor:
                for cc in range(c, k):
                    m[r][cc] -= factor * m[c][cc]
    return det


def _rank(columns: list[tuple[Fraction, ...]], k: int) -> int:
    m = [list(col) for col in columns]
    rank = 0
    for c in range(k):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        lead = m[rank][c]
        for r in range(rank + 1, len(m)):
            if m[r][c]:
                factor = m[r][c] / lead
                for cc in range(c, k):
                    m[r][cc] -= factor * m[rank][cc]
        rank += 1
    return rank


def matroid_bases(matrix: RationalMatrix, bound: int = 12) -> list[tuple[int, ...]]:
    """Column sets with nonzero maximal minor, sorted lexicographically."""
    if matrix.n > bound:
        raise TooLarge(f"n={matrix.n} exceeds bound {bound}")
    cols = [matrix.column(j) for j in range(1, matrix.n + 1)]
    if _rank(cols, matrix.k) < matrix.k:
        raise NotFullRank("matrix does not have full row rank")
    return [
        subset
        for subset in combinations(range(1, matrix.n + 1), matrix.k)
        if _det([cols[j - 1] for j in subset]) != 0
    ]


def is_positively_realizing(matrix: RationalMatrix) -> bool:
    """True iff every maximal minor (columns in increasing order) is >= 0."""
    cols = [matrix.column(j) for j in range(1, matrix.n + 1)]
    return all(
        _det([cols[j - 1] for j in subset]) >= 0
        for subset in combinations(range(1, matrix.n + 1), matrix.k)
    )


class _Eliminator:
    """Incremental exact row echelon over a growing column set."""

    def __init__(self, k: int):
        self.k = k
        self.rows: list[list[Fraction]] = []  # echelon rows, pivots leftmost
        self.pivots: list[int] = []

    def _reduce(self, vec: list[Fraction]) -> list[Fraction]:
        for row, piv in zip(self.rows, self.pivots):
            if vec[piv]:
                factor = vec[piv] / row[piv]
                for c in range(self.k):
                    vec[c] -= factor * row[c]
        return vec

    def add(self, column) -> None:
        vec = self._reduce(list(column))
        piv = next((c for c in range(self.k) if vec[c] != 0), None)
        if piv is not None:
            self.rows.append(vec)
            self.pivots.append(piv)

    def spans(self, column) -> bool:
        return all(x == 0 for x in self._reduce(list(column)))


def permutation_from_matrix(matrix: RationalMatrix) -> BoundedAffinePermutation:
    """The bounded affine permutation of the positroid realized by the matrix.

    pi(i) is the least j >= i with column i in the span of columns
    i+1, ..., j (indices mod n); a zero column is a loop with pi(i) = i
    and a column outside the span of all others is a coloop.
    """
    n, k = matrix.n, matrix.k
    cols = [matrix.column(j) for j in range(1, n + 1)]
    if _rank(cols, k) < k:
        raise NotFullRank("matrix does not have full row rank")
    if not is_positively_realizing(matrix):
        raise NotNonNegative("matrix has a negative maximal minor")
    window = []
    for i in range(1, n + 1):
        target = cols[i - 1]
        if all(x == 0 for x in target):
            window.append(i)
            continue
        elim = _Eliminator(k)
        for j in range(i + 1, i + n + 1):
            elim.add(cols[(j - 1) % n])
            if elim.spans(target):
                window.append(j)
                break
    return BoundedAffinePermutation.from_window(window)
