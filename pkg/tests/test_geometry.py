import random

import pytest

from positroids.core import (
    BoundedAffinePermutation,
    CyclicInterval,
    enumerate_permutations,
)
from positroids import diagram, essential, geometry
from positroids.geometry import (
    TooLarge,
    bases,
    codim1_boundary_count,
    codim_from_family,
    facet_system,
    length,
    variety_conditions,
)


def random_permutation(rng, n):
    sigma = list(range(1, n + 1))
    rng.shuffle(sigma)
    window = []
    for i in range(1, n + 1):
        v = i + (sigma[i - 1] - i) % n
        if v == i and rng.random() < 0.5:
            v = i + n
        window.append(v)
    return BoundedAffinePermutation.from_window(window)


class TestLength:
    def test_example(self, perm_a):
        assert length(perm_a) == 5

    def test_uniform_is_top_cell(self):
        assert length(BoundedAffinePermutation.uniform(3, 8)) == 0

    def test_identity(self):
        assert length(BoundedAffinePermutation.from_window([1, 2, 3, 4])) == 0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_dimension_bound(self, n):
        for p in enumerate_permutations(n):
            k = p.rank()
            assert 0 <= length(p) <= k * (n - k)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_length_equals_dots_in_triangles(self, n):
        # inversions counted dot by dot: other dots in each dot's triangle
        for p in enumerate_permutations(n):
            dots = diagram.dots(p)
            total = 0
            for i, c in dots:
                member = diagram.region_T(n, (i, c))
                total += sum(1 for d in dots if d != (i, c) and member(d))
            assert total == length(p)


class TestCodimFromFamily:
    def test_example_decomposition(self, family_a):
        # (3-1)*1 + (3-2)*2 + (3-2)*1 + (3-3)*e_full = 5
        assert codim_from_family(family_a) == 5

    def test_uniform_zero(self):
        F = diagram.ranked_essential_family(BoundedAffinePermutation.uniform(2, 7))
        assert codim_from_family(F) == 0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_equals_length_exhaustive(self, n):
        for p in enumerate_permutations(n):
            assert codim_from_family(diagram.ranked_essential_family(p)) == length(p)

    @pytest.mark.parametrize("n", [10, 12])
    def test_equals_length_randomized(self, n):
        rng = random.Random(1000 + n)
        for _ in range(10_000):
            p = random_permutation(rng, n)
            assert codim_from_family(diagram.ranked_essential_family(p)) == length(p)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_core_entries_carry_the_sum(self, n):
        for p in enumerate_permutations(n):
            F = diagram.ranked_essential_family(p)
            table = essential.excess(F)
            full = sum((F.k - r) * table[iv] for r, iv in F.entries)
            over_core = sum((F.k - r) * table[iv] for r, iv in essential.core(F))
            assert full == over_core


class TestFacetSystem:
    def test_uniform_is_hypersimplex(self):
        F = diagram.ranked_essential_family(BoundedAffinePermutation.uniform(2, 5))
        system = facet_system(F)
        assert system.inequalities == ()
        assert len(system.binary_lattice_points()) == 10

    def test_example_has_three_inequalities(self, family_a):
        system = facet_system(family_a)
        assert len(system.inequalities) == 3
        assert all(r < iv.length for iv, r in system.inequalities)

    def test_lattice_points_are_basis_indicators(self, family_a):
        pts = facet_system(family_a).binary_lattice_points()
        indicators = {
            tuple(1 if e in b else 0 for e in range(1, 9))
            for b in bases(family_a)
        }
        assert pts == indicators

    @pytest.mark.parametrize("n", [9, 10])
    def test_double_enumeration_at_larger_sizes(self, n):
        rng = random.Random(n)
        for _ in range(200):
            F = diagram.ranked_essential_family(random_permutation(rng, n))
            indicators = {
                tuple(1 if e in b else 0 for e in range(1, n + 1))
                for b in bases(F)
            }
            assert facet_system(F).binary_lattice_points() == indicators

    def test_h_rep_shape(self, family_a):
        rows = facet_system(family_a).h_rep_text().splitlines()
        assert rows[0] == "1 1 1 1 1 1 1 1 = 3"
        assert len(rows) == 1 + 16 + 3


class TestBases:
    def test_uniform_all_subsets(self):
        F = diagram.ranked_essential_family(BoundedAffinePermutation.uniform(2, 6))
        assert len(bases(F)) == 15

    def test_example_excludes_parallel_pair(self, family_a):
        found = bases(family_a)
        assert found
        assert all(not (5 in b and 6 in b) for b in found)

    def test_exchange_axiom_spot(self, family_a):
        found = [frozenset(b) for b in bases(family_a)]
        universe = set(found)
        for A in found[:10]:
            for B in found[:10]:
                for a in A - B:
                    assert any(
                        (A - {a}) | {b} in universe for b in B - A
                    )

    def test_too_large(self, family_a):
        with pytest.raises(TooLarge):
            bases(family_a, bound=4)


class TestVarietyConditions:
    def test_uniform_empty(self):
        F = diagram.ranked_essential_family(BoundedAffinePermutation.uniform(2, 5))
        assert variety_conditions(F) == ()

    def test_example_three_conditions(self, family_a):
        conds = variety_conditions(family_a)
        assert len(conds) == 3

    def test_conditions_imply_all_interval_ranks(self, family_a):
        connected = essential.connected_entries(family_a)
        for start in range(1, 9):
            for l in range(1, 9):
                iv = CyclicInterval(8, start, l)
                assert essential.rank_from_connected(
                    family_a, iv, connected
                ) == essential.rank_from_family(family_a, iv)


class TestBoundaryCount:
    def test_example_has_nine(self, perm_a):
        assert codim1_boundary_count(perm_a) == 9

    @pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 5)])
    def test_top_cell_has_boundaries(self, k, n):
        assert codim1_boundary_count(BoundedAffinePermutation.uniform(k, n)) > 0

    def test_point_cell_has_none(self):
        # zero-dimensional cells at n = 2: a loop plus a coloop
        for window in ([3, 2], [1, 4]):
            p = BoundedAffinePermutation.from_window(window)
            assert length(p) == p.rank() * (2 - p.rank())
            assert codim1_boundary_count(p) == 0

    def test_too_large(self):
        with pytest.raises(TooLarge):
            codim1_boundary_count(BoundedAffinePermutation.uniform(3, 10))
