import math

from hypothesis import given, settings
from hypothesis import strategies as st

from latcover.cover import (
    covering_number_exact,
    covering_number_greedy,
    independence_exact,
    independence_greedy,
    is_independent,
    meet_bound_check,
)
from latcover.lattice import LatticeShape, LatticeSubset, in_diagonal_sum, restrict
from latcover.restrictions import disjoint_coloring
from latcover.subspaces import PatternFamily


@st.composite
def instances(draw, max_d=3, max_n=4):
    d = draw(st.integers(1, max_d))
    dims = tuple(draw(st.integers(1, max_n)) for _ in range(d))
    shape = LatticeShape(dims)
    pts = draw(st.lists(st.sampled_from(list(shape.points())), max_size=12))
    pats = draw(st.lists(st.integers(0, (1 << d) - 1), min_size=1, max_size=1 << d))
    return LatticeSubset(shape, pts), PatternFamily(d, pats)


@settings(max_examples=150, deadline=None)
@given(instances())
def test_sandwich(inst):
    A, M = inst
    mc = covering_number_exact(A, M).value
    assert independence_greedy(A, M).value <= independence_exact(A, M).value <= mc
    assert mc <= covering_number_greedy(A, M).value <= len(A)
    assert independence_greedy(A, M).value >= math.ceil(mc / len(M))


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_monotone_in_subset(inst, data):
    A, M = inst
    keep = data.draw(st.lists(st.booleans(), min_size=len(A), max_size=len(A)))
    B = LatticeSubset._trusted(A.shape, [p for p, k in zip(A, keep) if k])
    assert covering_number_exact(B, M).value <= covering_number_exact(A, M).value


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_larger_family_needs_fewer(inst, data):
    A, M = inst
    extra = data.draw(st.lists(st.integers(0, (1 << A.d) - 1), max_size=3))
    M2 = PatternFamily(A.d, list(M) + extra)
    assert covering_number_exact(A, M2).value <= covering_number_exact(A, M).value


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_axis_permutation_invariance(inst, data):
    A, M = inst
    perm = data.draw(st.permutations(range(A.d)))
    shape = LatticeShape([A.shape.dims[j] for j in perm])
    B = LatticeSubset(shape, [tuple(p[j] for j in perm) for p in A])
    inv = {j: k for k, j in enumerate(perm)}
    M2 = PatternFamily(A.d, [sum(1 << inv[j] for j in range(A.d) if b >> j & 1) for b in M])
    assert covering_number_exact(B, M2).value == covering_number_exact(A, M).value
    assert independence_exact(B, M2).value == independence_exact(A, M).value


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_restriction_never_increases(inst, data):
    A, M = inst
    xs = [data.draw(st.sets(st.integers(1, n))) for n in A.shape.dims]
    induced = restrict(A, xs).induced
    assert covering_number_exact(induced, M).value <= covering_number_exact(A, M).value


@settings(max_examples=80, deadline=None)
@given(instances(max_d=2, max_n=4), st.data())
def test_meet_bound(inst, data):
    A, M1 = inst
    pats = data.draw(st.lists(st.integers(0, (1 << A.d) - 1), min_size=1, max_size=4))
    assert meet_bound_check(A, M1, PatternFamily(A.d, pats)).holds


@settings(max_examples=80, deadline=None)
@given(instances(max_d=3, max_n=3), st.data())
def test_diagonal_sum_additivity(inst, data):
    A1, M = inst
    if M.contains_full():
        return
    # shift a second copy into the block beyond the first box
    dims = tuple(2 * n for n in A1.shape.dims)
    shape = LatticeShape(dims)
    A2pts = data.draw(st.lists(st.sampled_from(list(A1.shape.points())), max_size=6))
    L1 = LatticeSubset(shape, A1.points)
    L2 = LatticeSubset(shape, [tuple(x + n for x, n in zip(p, A1.shape.dims)) for p in A2pts])
    assert in_diagonal_sum(L1, L2)
    total = covering_number_exact(L1.union(L2), M).value
    assert total == covering_number_exact(L1, M).value + covering_number_exact(L2, M).value


@settings(max_examples=100, deadline=None)
@given(instances(max_n=6))
def test_coloring_guarantee(inst):
    A, _ = inst
    col = disjoint_coloring(A)
    assert len(col.captured) >= col.guarantee
    assert col.captured.issubset(A)


@settings(max_examples=100, deadline=None)
@given(instances())
def test_exact_independent_witness(inst):
    A, M = inst
    res = independence_exact(A, M)
    assert is_independent(res.witness.points, M) and res.witness.issubset(A)
