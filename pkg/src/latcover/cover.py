"""Exact and greedy M-covering numbers, independence numbers, and decompositions."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import kernels
from .errors import CapacityError, ShapeMismatchError
from .lattice import LatticeShape, LatticeSubset, Point
from .subspaces import (
    Pattern,
    PatternFamily,
    Subspace,
    axes_of,
    enumerate_subspaces_meeting,
    in_union_through,
    meet_family,
    share_subspace,
    star_family,
    sub_patterns,
    subspace_through,
)

DEFAULT_EXACT_CAP = int(os.environ.get("LATCOVER_EXACT_CAP", "64"))
ENUMERATION_COUNT_LIMIT = 10**7


@dataclass(frozen=True)
class CoverDecomposition:
    subspaces: tuple[Subspace, ...]

    @property
    def length(self) -> int:
        return len(self.subspaces)

    def covers(self, A: LatticeSubset) -> bool:
        return all(any(S.contains(p) for S in self.subspaces) for p in A)

    def to_list(self) -> list[dict]:
        return [S.to_dict() for S in self.subspaces]


@dataclass(frozen=True)
class CoverResult:
    value: int
    witness: CoverDecomposition
    stats: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"value": self.value, "witness": self.witness.to_list(), "stats": dict(self.stats)}


@dataclass(frozen=True)
class IndependenceResult:
    value: int
    witness: LatticeSubset
    method: str

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "witness": [list(p) for p in self.witness]}


def _check_order(A: LatticeSubset, M: PatternFamily) -> None:
    if A.d != M.d:
        raise ShapeMismatchError(f"family over [{M.d}] used with an order-{A.d} subset")


def _candidates(A: LatticeSubset, M: PatternFamily) -> list[tuple[Subspace, int]]:
    """Subspaces of maximal patterns meeting A, as point bitmasks over A.

    Identical traces keep their first representative and traces strictly
    inside another trace are dropped; neither changes the optimum.
    """
    index = {p: i for i, p in enumerate(A.points)}
    raw = []
    seen = set()
    for S, trace in enumerate_subspaces_meeting(A, M, M.maximal()):
        mask = 0
        for p in trace:
            mask |= 1 << index[p]
        if mask not in seen:
            seen.add(mask)
            raw.append((S, mask))
    return [
        (S, m) for S, m in raw
        if not any(m != o and m & o == m for _, o in raw)
    ]


def _greedy_pick(n: int, masks: Sequence[int]) -> list[int]:
    unc = (1 << n) - 1
    chosen = []
    while unc:
        best_i, best_gain = -1, 0
        for i, m in enumerate(masks):
            g = bin(m & unc).count("1")
            if g > best_gain:
                best_i, best_gain = i, g
        chosen.append(best_i)
        unc &= ~masks[best_i]
    return chosen


def covering_number_greedy(A: LatticeSubset, M: PatternFamily) -> CoverResult:
    """Greedy set cover: an upper bound on the M-covering number."""
    _check_order(A, M)
    cands = _candidates(A, M)
    chosen = _greedy_pick(len(A), [m for _, m in cands])
    witness = CoverDecomposition(tuple(cands[i][0] for i in chosen))
    return CoverResult(len(chosen), witness, {"method": "greedy", "family_size": len(M)})


def _disjoint_neighbourhood_bound(n: int, masks: Sequence[int]) -> int:
    nb = [0] * n
    for m in masks:
        for p in range(n):
            if m >> p & 1:
                nb[p] |= m
    unc, lb = (1 << n) - 1, 0
    while unc:
        p = (unc & -unc).bit_length() - 1
        lb += 1
        unc &= ~nb[p]
    return lb


def covering_number_exact(
    A: LatticeSubset, M: PatternFamily, cap: int | None = None, node_limit: int = 0
) -> CoverResult:
    """Exact M-covering number by branch and bound.

    Branches on the uncovered point lying in the fewest candidate subspaces,
    seeded with the greedy cover and pruned by a lower bound counting points
    whose candidate neighbourhoods are pairwise disjoint.
    """
    _check_order(A, M)
    cap = DEFAULT_EXACT_CAP if cap is None else cap
    n = len(A)
    if n > cap:
        raise CapacityError(
            f"{n} points exceed the exact-solver cap of {cap}; use the greedy solver "
            "or raise the cap"
        )
    stats = {
        "method": "exact",
        "backend": kernels.BACKEND if n <= 64 else "python",
        "family_size": len(M),
        "reduced_family": [list(axes_of(b)) for b in M.maximal()],
    }
    if n == 0:
        stats.update(nodes=0, greedy_upper_bound=0, lower_bound=0)
        return CoverResult(0, CoverDecomposition(()), stats)
    cands = _candidates(A, M)
    masks = [m for _, m in cands]
    greedy = _greedy_pick(n, masks)
    lb = _disjoint_neighbourhood_bound(n, masks)
    value, sol, nodes, complete = kernels.min_cover(n, masks, len(greedy), greedy, node_limit)
    if not complete:
        raise CapacityError(f"exact cover search exceeded {node_limit} nodes")
    stats.update(nodes=nodes, greedy_upper_bound=len(greedy), lower_bound=lb, candidates=len(masks))
    witness = CoverDecomposition(tuple(cands[i][0] for i in sol))
    return CoverResult(value, witness, stats)


def covering_number(A: LatticeSubset, M: PatternFamily, cap: int | None = None) -> int:
    return covering_number_exact(A, M, cap).value


def covering_at_least(A: LatticeSubset, M: PatternFamily, k: int, cap: int | None = None) -> bool:
    """Decide ``Mc(A) >= k``, skipping the exact solve when cheap bounds settle it."""
    if k <= 0:
        return True
    if independence_greedy(A, M).value >= k:
        return True
    if covering_number_greedy(A, M).value < k:
        return False
    return covering_number_exact(A, M, cap).value >= k


def subspace_covering_closed_form(B: Pattern, M: PatternFamily, shape: LatticeShape) -> int:
    """``min over B' in M of prod_{j in B minus B'} n_j``."""
    if shape.d != M.d:
        raise ShapeMismatchError(f"family over [{M.d}] used with an order-{shape.d} shape")
    return min(math.prod(shape.dims[j - 1] for j in axes_of(B & ~b)) for b in M)


def intersect_subspaces(S1: Subspace, S2: Subspace) -> Subspace | None:
    fixed = []
    for f, g in zip(S1.fixed, S2.fixed):
        if f and g and f != g:
            return None
        fixed.append(f or g)
    return Subspace(S1.pattern & S2.pattern, tuple(fixed))


@dataclass(frozen=True)
class MeetBoundReport:
    k1: int
    k2: int
    k: int
    intersection_cover: CoverDecomposition

    @property
    def holds(self) -> bool:
        return self.k <= self.k1 * self.k2

    def to_dict(self) -> dict:
        return {
            "k1": self.k1, "k2": self.k2, "k_meet": self.k, "holds": self.holds,
            "intersection_cover": self.intersection_cover.to_list(),
        }


def meet_bound_check(A: LatticeSubset, M1: PatternFamily, M2: PatternFamily) -> MeetBoundReport:
    """Compare ``Mc`` under the meet family with the product of the two covers.

    Also builds the explicit cover by pairwise intersections of optimal
    M1- and M2-covers (non-empty intersections only).
    """
    r1 = covering_number_exact(A, M1)
    r2 = covering_number_exact(A, M2)
    r = covering_number_exact(A, meet_family(M1, M2))
    pieces = []
    for S1 in r1.witness.subspaces:
        for S2 in r2.witness.subspaces:
            S = intersect_subspaces(S1, S2)
            if S is not None and S not in pieces:
                pieces.append(S)
    cover = CoverDecomposition(tuple(pieces))
    assert cover.covers(A), "intersections of two covers must cover A"
    return MeetBoundReport(r1.value, r2.value, r.value, cover)


def independence_greedy(A: LatticeSubset, M: PatternFamily) -> IndependenceResult:
    """Pick the smallest point outside M(u^1) u ... u M(u^{m-1}) until none remains.

    The chosen points are pairwise independent and their unions M(u^i) cover
    A, which gives ``t >= Mc(A)/|M|``.
    """
    _check_order(A, M)
    chosen: list[Point] = []
    for p in A:
        if not any(in_union_through(u, p, M) for u in chosen):
            chosen.append(p)
    return IndependenceResult(len(chosen), LatticeSubset._trusted(A.shape, chosen), "greedy")


def greedy_covers_by_unions(A: LatticeSubset, M: PatternFamily, witness: LatticeSubset) -> bool:
    """Whether A lies in the union of M(u) over the witness points."""
    return all(any(in_union_through(u, p, M) for u in witness) for p in A)


def is_independent(points: Sequence[Point], M: PatternFamily) -> bool:
    pts = list(points)
    return not any(
        share_subspace(p, q, M) for i, p in enumerate(pts) for q in pts[i + 1:]
    )


def independence_exact(A: LatticeSubset, M: PatternFamily, cap: int | None = None) -> IndependenceResult:
    """Maximum M-independent subset via a maximum independent set search."""
    _check_order(A, M)
    cap = DEFAULT_EXACT_CAP if cap is None else cap
    n = len(A)
    if n > cap:
        raise CapacityError(f"{n} points exceed the exact-solver cap of {cap}")
    pts = A.points
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if share_subspace(pts[i], pts[j], M):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    size, mask, _, _ = kernels.max_independent(n, adj)
    witness = [pts[i] for i in range(n) if mask >> i & 1]
    return IndependenceResult(size, LatticeSubset._trusted(A.shape, witness), "exact")


@dataclass
class DecompositionEnumeration:
    """Ordered minimal-length covers of A.

    ``count`` is exact when ``count_exact``; ``tuples`` holds at most ``cap``
    of them and ``truncated`` says whether any were left out.
    """

    length: int
    count: int
    count_exact: bool
    tuples: list[CoverDecomposition]
    truncated: bool
    bound: int

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "count": self.count,
            "count_exact": self.count_exact,
            "bound": self.bound,
            "truncated": self.truncated,
            "tuples": [t.to_list() for t in self.tuples],
        }


def decomposition_count_bound(M: PatternFamily, l: int, d: int) -> int:
    return (len(M) * l**d) ** l


def _cover_families(n: int, masks: Sequence[int], slots: int) -> Iterator[tuple[int, ...]]:
    """Each set of exactly ``slots`` masks covering all n bits, once.

    Branches on the lowest uncovered bit; taking its k-th candidate forbids
    the earlier ones in that subtree, so no family is produced twice.
    """
    by_point = [[i for i, m in enumerate(masks) if m >> p & 1] for p in range(n)]
    nb = [0] * n
    for p in range(n):
        for i in by_point[p]:
            nb[p] |= masks[i]

    def lower_bound(unc):
        lb = 0
        while unc:
            p = (unc & -unc).bit_length() - 1
            lb += 1
            unc &= ~nb[p]
        return lb

    chosen: list[int] = []

    def walk(unc, left, forbidden):
        if unc == 0:
            if left == 0:
                yield tuple(sorted(chosen))
            return
        if left == 0 or lower_bound(unc) > left:
            return
        p = (unc & -unc).bit_length() - 1
        for i in by_point[p]:
            if forbidden >> i & 1:
                continue
            chosen.append(i)
            yield from walk(unc & ~masks[i], left - 1, forbidden)
            chosen.pop()
            forbidden |= 1 << i

    yield from walk((1 << n) - 1, slots, 0)


def enumerate_min_decompositions(
    A: LatticeSubset, M: PatternFamily, cap: int = 1000, count_limit: int = ENUMERATION_COUNT_LIMIT
) -> DecompositionEnumeration:
    """All ordered l-tuples of M-subspaces covering A, where l = Mc(A).

    A minimal tuple never repeats a subspace and never uses one disjoint from
    A (either could be dropped, giving a shorter cover), so the tuples are the
    orderings of l-element families of subspaces meeting A.
    """
    l = covering_number_exact(A, M).value
    bound = decomposition_count_bound(M, l, A.d)
    if l == 0:
        return DecompositionEnumeration(0, 1, True, [CoverDecomposition(())], False, bound)
    index = {p: i for i, p in enumerate(A.points)}
    cands = []
    for S, trace in enumerate_subspaces_meeting(A, M):
        mask = 0
        for p in trace:
            mask |= 1 << index[p]
        cands.append((S, mask))
    orderings = math.factorial(l)
    families = 0
    exact = True
    emitted: list[CoverDecomposition] = []
    for fam in _cover_families(len(A), [m for _, m in cands], l):
        families += 1
        if len(emitted) < cap:
            for perm in itertools.permutations(fam):
                if len(emitted) >= cap:
                    break
                emitted.append(CoverDecomposition(tuple(cands[i][0] for i in perm)))
        if families * orderings > count_limit:
            exact = False
            break
    count = families * orderings
    return DecompositionEnumeration(l, count, exact, emitted, count > len(emitted), bound)


@dataclass(frozen=True)
class ProbeResult:
    """A C-subspace whose trace on A needs at least l+1 subspaces from C*."""

    subspace: Subspace
    trace: LatticeSubset
    star_value: int


def forced_subspace_probe(A: LatticeSubset, M: PatternFamily, l: int) -> ProbeResult | None:
    """First C-subspace (C non-empty, inside a member of M) with C*-covering >= l+1.

    Scans C in (order, bitmask) order and subspaces by fixed coordinates.
    Any length-l M-cover of A must then use a subspace containing it.
    """
    _check_order(A, M)
    for C in sub_patterns(M):
        star = star_family(C, M.d)
        for S, trace in enumerate_subspaces_meeting(A, M, [C]):
            if len(trace) < l + 1:
                continue
            if covering_at_least(trace, star, l + 1):
                return ProbeResult(S, trace, covering_number_exact(trace, star).value)
    return None


def supersets_in_family(S: Subspace, M: PatternFamily) -> list[Subspace]:
    """The M-subspaces containing S: one per B in M with B containing S's pattern."""
    out = []
    for B in M:
        if S.pattern & ~B == 0:
            out.append(Subspace(B, tuple(0 if B >> j & 1 else f for j, f in enumerate(S.fixed))))
    return out


def independence_ratio(A: LatticeSubset, M: PatternFamily) -> Fraction:
    """``I_M(A) / Mc(A)`` as an exact rational (A must be non-empty)."""
    return Fraction(independence_exact(A, M).value, covering_number_exact(A, M).value)


__all__ = [
    "CoverDecomposition", "CoverResult", "IndependenceResult", "MeetBoundReport",
    "DecompositionEnumeration", "ProbeResult", "covering_number_exact", "covering_number_greedy",
    "covering_number", "covering_at_least", "subspace_covering_closed_form", "meet_bound_check",
    "independence_greedy", "independence_exact", "enumerate_min_decompositions",
    "forced_subspace_probe", "supersets_in_family", "decomposition_count_bound",
    "greedy_covers_by_unions", "is_independent", "intersect_subspaces", "subspace_through",
    "independence_ratio",
]
