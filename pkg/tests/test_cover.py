import itertools
import math
import random

import pytest

from latcover.cover import (
    covering_at_least,
    covering_number_exact,
    covering_number_greedy,
    decomposition_count_bound,
    enumerate_min_decompositions,
    forced_subspace_probe,
    greedy_covers_by_unions,
    independence_exact,
    independence_greedy,
    independence_ratio,
    is_independent,
    meet_bound_check,
    subspace_covering_closed_form,
    supersets_in_family,
)
from latcover.errors import CapacityError, ShapeMismatchError
from latcover.lattice import LatticeShape, LatticeSubset
from latcover.subspaces import (
    PatternFamily,
    Subspace,
    full_family,
    mask_of,
    point_family,
    slice_family,
)

from oracles import all_subspaces, brute_cover, brute_independence


def diag(n, l, d=2):
    return LatticeSubset((n,) * d, [(i,) * d for i in range(1, l + 1)])


def random_instance(rng, max_d=3, max_n=4, density=0.4):
    d = rng.randint(1, max_d)
    dims = tuple(rng.randint(1, max_n) for _ in range(d))
    shape = LatticeShape(dims)
    A = LatticeSubset(shape, [p for p in shape.points() if rng.random() < density])
    pats = rng.sample(range(1 << d), rng.randint(1, 1 << d))
    return A, PatternFamily(d, pats)


class TestExactCover:
    def test_diagonal(self):
        assert covering_number_exact(diag(4, 4), slice_family(2)).value == 4

    def test_empty(self):
        assert covering_number_exact(LatticeSubset((3, 3)), slice_family(2)).value == 0

    def test_full_family(self):
        A = LatticeSubset((3, 3), [(1, 2), (3, 1)])
        assert covering_number_exact(A, full_family(2)).value == 1

    def test_box_by_rows(self):
        A = LatticeSubset.full((2, 3))
        assert covering_number_exact(A, PatternFamily.from_axes(2, [[1]])).value == 3

    def test_point_family_counts_points(self):
        A = diag(3, 3).union(LatticeSubset((3, 3), [(1, 3)]))
        assert covering_number_exact(A, point_family(2)).value == 4

    def test_witness_covers(self):
        rng = random.Random(5)
        for _ in range(50):
            A, M = random_instance(rng)
            res = covering_number_exact(A, M)
            assert res.witness.covers(A)
            assert res.witness.length == res.value
            assert all(S.pattern in M for S in res.witness.subspaces)

    def test_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(150):
            A, M = random_instance(rng)
            expected = brute_cover(A.shape.dims, A.points, M.as_axes())
            assert covering_number_exact(A, M).value == expected, (A, M)

    def test_greedy_is_upper_bound(self):
        rng = random.Random(12)
        for _ in range(100):
            A, M = random_instance(rng)
            g = covering_number_greedy(A, M)
            assert g.witness.covers(A)
            assert g.value >= covering_number_exact(A, M).value

    def test_cap(self):
        A = LatticeSubset.full((5, 5))
        with pytest.raises(CapacityError):
            covering_number_exact(A, slice_family(2), cap=10)

    def test_order_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            covering_number_exact(diag(2, 2), slice_family(3))

    def test_covering_at_least(self):
        A = diag(5, 5)
        assert covering_at_least(A, slice_family(2), 5)
        assert not covering_at_least(A, slice_family(2), 6)

    def test_beyond_kernel_width(self):
        # more than 64 points takes the arbitrary-precision path
        A = LatticeSubset.full((9, 9))
        assert covering_number_exact(A, slice_family(2), cap=100).value == 9


class TestClosedForm:
    def test_rows_of_box(self):
        assert subspace_covering_closed_form(mask_of([1, 2]), PatternFamily.from_axes(2, [[1]]), LatticeShape((2, 3))) == 3

    def test_contained_pattern(self):
        M = PatternFamily.from_axes(3, [[1, 2]])
        assert subspace_covering_closed_form(mask_of([2]), M, LatticeShape((3, 3, 3))) == 1

    def test_cube_by_slices(self):
        for n in (2, 3, 4):
            assert subspace_covering_closed_form(7, slice_family(3), LatticeShape((n, n, n))) == n

    def test_agrees_with_exact(self):
        shape = LatticeShape((2, 3, 2))
        rng = random.Random(3)
        for _ in range(30):
            M = PatternFamily(3, rng.sample(range(8), rng.randint(1, 8)))
            for B in range(8):
                S = Subspace(B, tuple(0 if B >> j & 1 else 1 for j in range(3)))
                exact = covering_number_exact(S.points(shape), M).value
                assert exact == subspace_covering_closed_form(B, M, shape)


class TestMeetBound:
    def test_diagonal_by_rows_and_columns(self):
        r = meet_bound_check(diag(2, 2), PatternFamily.from_axes(2, [[1]]), PatternFamily.from_axes(2, [[2]]))
        assert (r.k1, r.k2, r.k) == (2, 2, 2)
        assert r.holds

    def test_empty(self):
        r = meet_bound_check(LatticeSubset((2, 2)), slice_family(2), slice_family(2))
        assert (r.k1, r.k2, r.k) == (0, 0, 0)

    def test_full_family(self):
        r = meet_bound_check(LatticeSubset.full((2, 2)), full_family(2), full_family(2))
        assert (r.k1, r.k2, r.k) == (1, 1, 1)

    def test_random(self):
        rng = random.Random(8)
        for _ in range(60):
            A, M1 = random_instance(rng)
            M2 = PatternFamily(A.d, rng.sample(range(1 << A.d), rng.randint(1, 1 << A.d)))
            r = meet_bound_check(A, M1, M2)
            assert r.holds
            assert r.intersection_cover.covers(A)
            assert r.intersection_cover.length <= r.k1 * r.k2


class TestIndependence:
    def test_greedy_diagonal(self):
        assert independence_greedy(diag(3, 3), slice_family(2)).value == 3

    def test_greedy_square(self):
        g = independence_greedy(LatticeSubset.full((2, 2)), slice_family(2))
        assert g.witness.points == ((1, 1), (2, 2))

    def test_greedy_empty(self):
        assert independence_greedy(LatticeSubset((2, 2)), slice_family(2)).value == 0

    def test_exact_square(self):
        assert independence_exact(LatticeSubset.full((2, 2)), slice_family(2)).value == 2

    def test_exact_full_family(self):
        A = LatticeSubset((3, 3), [(1, 1), (2, 3), (3, 2)])
        assert independence_exact(A, full_family(2)).value == 1
        assert independence_exact(LatticeSubset((3, 3)), full_family(2)).value == 0

    def test_diagonal_any_order(self):
        for d in (2, 3):
            assert independence_exact(diag(4, 4, d), slice_family(d)).value == 4

    def test_greedy_certificate(self):
        rng = random.Random(21)
        for _ in range(150):
            A, M = random_instance(rng)
            g = independence_greedy(A, M)
            assert is_independent(g.witness.points, M)
            assert greedy_covers_by_unions(A, M, g.witness)
            mc = covering_number_exact(A, M).value
            assert g.value >= math.ceil(mc / len(M))

    def test_exact_matches_brute_force(self):
        rng = random.Random(22)
        for _ in range(100):
            A, M = random_instance(rng, max_n=3)
            got = independence_exact(A, M)
            assert is_independent(got.witness.points, M)
            assert got.value == brute_independence(A.points, M.as_axes())

    def test_ratio(self):
        A = LatticeSubset((2, 2, 2), [(1, 1, 2), (1, 2, 1), (2, 1, 1)])
        assert str(independence_ratio(A, slice_family(3))) == "1/2"


def brute_ordered_covers(A, M):
    """Count ordered tuples of subspaces of minimum length covering A."""
    subs = all_subspaces(A.shape.dims, M.as_axes(), labeled=True)
    target = set(A.points)
    l = brute_cover(A.shape.dims, A.points, M.as_axes())
    if l == 0:
        return 0, 1
    count = 0
    for combo in itertools.product(subs, repeat=l):
        if target <= set().union(*combo):
            count += 1
    return l, count


class TestDecompositions:
    @pytest.mark.parametrize("l,count", [(1, 2), (2, 8), (3, 48)])
    def test_diagonal_counts(self, l, count):
        en = enumerate_min_decompositions(diag(l, l), slice_family(2))
        assert (en.length, en.count, en.count_exact) == (l, count, True)
        assert en.count <= decomposition_count_bound(slice_family(2), l, 2)

    def test_single_point_tuples(self):
        en = enumerate_min_decompositions(LatticeSubset((2, 2), [(1, 1)]), slice_family(2))
        assert en.count == 2
        assert {t.subspaces for t in en.tuples} == {
            (Subspace(1, (0, 1)),), (Subspace(2, (1, 0)),)
        }

    def test_empty(self):
        en = enumerate_min_decompositions(LatticeSubset((2, 2)), slice_family(2))
        assert (en.length, en.count) == (0, 1)
        assert en.tuples[0].length == 0

    def test_cap_truncates_listing_only(self):
        en = enumerate_min_decompositions(diag(3, 3), slice_family(2), cap=5)
        assert en.count == 48 and len(en.tuples) == 5 and en.truncated

    def test_matches_brute_force(self):
        rng = random.Random(31)
        checked = 0
        while checked < 25:
            A, M = random_instance(rng, max_d=2, max_n=3)
            if len(A) > 4:
                continue
            l, count = brute_ordered_covers(A, M)
            en = enumerate_min_decompositions(A, M)
            assert (en.length, en.count) == (l, count), (A, M)
            checked += 1

    def test_emitted_tuples_are_distinct_covers(self):
        A = LatticeSubset((3, 3), [(1, 1), (1, 2), (2, 3), (3, 3)])
        en = enumerate_min_decompositions(A, slice_family(2))
        assert len(set(t.subspaces for t in en.tuples)) == len(en.tuples) == en.count
        assert all(t.covers(A) for t in en.tuples)


class TestProbe:
    def test_row_with_extra_point(self):
        A = LatticeSubset((3, 3), [(1, 1), (2, 1), (3, 1), (1, 2)])
        got = forced_subspace_probe(A, slice_family(2), 1)
        assert got.subspace == Subspace(mask_of([1]), (0, 1))
        assert got.star_value == 3

    def test_single_point(self):
        assert forced_subspace_probe(LatticeSubset((2, 2), [(1, 2)]), slice_family(2), 1) is None

    def test_diagonal(self):
        assert forced_subspace_probe(diag(3, 3), slice_family(2), 3) is None

    def test_supersets(self):
        M = PatternFamily.from_axes(3, [[1], [1, 2], [3]])
        got = supersets_in_family(Subspace(mask_of([1]), (0, 2, 3)), M)
        assert got == [Subspace(mask_of([1]), (0, 2, 3)), Subspace(mask_of([1, 2]), (0, 0, 3))]
