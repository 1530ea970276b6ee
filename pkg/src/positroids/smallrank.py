"""
Rank-2 specialization: deficient-rank flats and the cyclic-interval
positroid criterion.

For a loopless rank-2 positroid the deficient flats (closed sets whose
rank falls short of their size) are exactly the ranked essential sets;
a loopless rank-2 matroid, described by its partition into parallel
classes, is a positroid iff every class is a cyclic interval.  In rank 3
and up the two families genuinely differ.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CyclicInterval, mask_to_interval
from .essential import RankedEssentialFamily
from .geometry import TooLarge, bases


class NotRank2(ValueError):
    pass


class HasLoop(ValueError):
    pass


@dataclass(frozen=True)
class DeficientFlatFamily:
    """Flats F with rank(F) < |F|, as (rank, frozenset) pairs."""

    n: int
    entries: tuple[tuple[int, frozenset[int]], ...]

    def as_set(self) -> set[tuple[int, frozenset[int]]]:
        return set(self.entries)


def _subset_rank_table(n: int, basis_masks: list[int]) -> list[int]:
    """rank(S) = max |S & B| over bases, for every subset mask."""
    return [
        max((S & B).bit_count() for B in basis_masks) for S in range(1 << n)
    ]


def deficient_flats(
    family: RankedEssentialFamily, bound: int = 12
) -> DeficientFlatFamily:
    """All deficient flats of the positroid, computed from its bases."""
    n = family.n
    if n > bound:
        raise TooLarge(f"n={n} exceeds bound {bound}")
    basis_masks = []
    for b in bases(family, bound=bound):
        m = 0
        for e in b:
            m |= 1 << (e - 1)
        basis_masks.append(m)
    rank = _subset_rank_table(n, basis_masks)
    entries = []
    for S in range(1 << n):
        r = rank[S]
        closed = all(
            S >> x & 1 or rank[S | 1 << x] > r for x in range(n)
        )
        if closed and r < S.bit_count():
            entries.append(
                (r, frozenset(e + 1 for e in range(n) if S >> e & 1))
            )
    entries.sort(key=lambda e: (len(e[1]), sorted(e[1]), e[0]))
    return DeficientFlatFamily(n, tuple(entries))


def family_as_flat_entries(
    family: RankedEssentialFamily,
) -> set[tuple[int, frozenset[int]]]:
    """The family's deficient pairs with intervals flattened to element sets.

    Deficient-flat families only ever contain pairs with r < |F|, so the
    full-set entry drops out exactly when the positroid is free.
    """
    return {
        (r, frozenset(iv.residues()))
        for r, iv in family.entries
        if r < iv.length
    }


def is_positroid_rank2(
    n: int, classes: list[list[int]], loops: list[int] | None = None
) -> bool:
    """Positroid test for a loopless rank-2 matroid given by parallel classes.

    >>> is_positroid_rank2(5, [[1, 2], [3], [4, 5]])
    True
    >>> is_positroid_rank2(4, [[1, 3], [2], [4]])
    False
    """
    if loops:
        raise HasLoop(f"loops {sorted(loops)} not allowed: statements assume looplessness")
    seen: set[int] = set()
    for cls in classes:
        for e in cls:
            if not 1 <= e <= n or e in seen:
                raise ValueError(f"classes do not partition [1, {n}]")
            seen.add(e)
    if len(seen) != n:
        raise ValueError(f"classes do not partition [1, {n}]")
    if len(classes) < 2:
        raise NotRank2("fewer than two parallel classes gives rank below 2")
    for cls in classes:
        mask = 0
        for e in cls:
            mask |= 1 << (e - 1)
        if mask_to_interval(n, mask) is None:
            return False
    return True


def parallel_classes(family: RankedEssentialFamily) -> list[frozenset[int]] | None:
    """Parallel classes of a loopless rank-2 positroid, or None if not one.

    Elements are parallel when their two-element set has rank 1; in rank 2
    this is an equivalence partitioning the ground set.
    """
    n = family.n
    if family.k != 2:
        return None
    singles = [
        rank_of_pairset(family, (e,)) for e in range(1, n + 1)
    ]
    if any(r == 0 for r in singles):
        return None  # has a loop
    classes: list[set[int]] = []
    for e in range(1, n + 1):
        for cls in classes:
            anchor = next(iter(cls))
            if rank_of_pairset(family, (anchor, e)) == 1:
                cls.add(e)
                break
        else:
            classes.append({e})
    return [frozenset(c) for c in classes]


def rank_of_pairset(family: RankedEssentialFamily, elements: tuple[int, ...]) -> int:
    """Rank of a set of at most two elements, via interval ranks."""
    from .essential import rank_from_family

    n = family.n
    if len(elements) == 1:
        return rank_from_family(family, CyclicInterval(n, elements[0], 1))
    a, b = elements
    iv = CyclicInterval.from_endpoints(n, a, b)
    alt = CyclicInterval.from_endpoints(n, b, a)
    if iv.length == 2:
        return rank_from_family(family, iv)
    if alt.length == 2:
        return rank_from_family(family, alt)
    # not adjacent: rank of {a, b} is 1 iff every basis misses one of them
    from .geometry import bases as all_bases

    best = 0
    for basis in all_bases(family):
        best = max(best, (a in basis) + (b in basis))
        if best == 2:
            break
    return best
