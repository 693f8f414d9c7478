"""Constructive extraction of coordinate sub-boxes that keep covering numbers large.

Every certificate's ``verified_value`` comes from a fresh exact solve on the
induced set; nothing a construction claims is trusted.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cover import (
    covering_at_least,
    covering_number_exact,
    covering_number_greedy,
    forced_subspace_probe,
    independence_greedy,
    supersets_in_family,
)
from .errors import CapacityError, HypothesisNotMet
from .lattice import LatticeShape, LatticeSubset, Restriction, off_diagonal_part, restrict
from .subspaces import (
    Pattern,
    PatternFamily,
    Subspace,
    axes_of,
    enumerate_subspaces_meeting,
    star_family,
    sub_patterns,
)

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10**6


@dataclass
class RestrictionCertificate:
    restriction: Restriction
    claimed_lower_bound: int
    verified_value: int
    theorem: str
    verified_exact: bool = True
    details: dict = field(default_factory=dict)

    @property
    def axis_sets(self) -> tuple[frozenset[int], ...]:
        return self.restriction.axis_sets

    @property
    def ok(self) -> bool:
        return self.verified_value >= self.claimed_lower_bound

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "claimed_lower_bound": self.claimed_lower_bound,
            "verified_value": self.verified_value,
            "verified_exact": self.verified_exact,
            "axis_set_sizes": list(self.restriction.sizes()),
            **self.restriction.to_dict(),
            "details": self.details,
        }


def _verify(induced: LatticeSubset, M: PatternFamily) -> tuple[int, bool]:
    try:
        return covering_number_exact(induced, M).value, True
    except CapacityError:
        # Independent points each need their own subspace: a sound lower bound.
        return independence_greedy(induced, M).value, False


def _trivial(A: LatticeSubset, theorem: str) -> RestrictionCertificate:
    return RestrictionCertificate(restrict(A, [()] * A.d), 0, 0, theorem)


def _mc_for_message(A: LatticeSubset, M: PatternFamily) -> int:
    try:
        return covering_number_exact(A, M).value
    except CapacityError:
        return covering_number_greedy(A, M).value


def restrict_linear(A: LatticeSubset, M: PatternFamily, l: int) -> RestrictionCertificate:
    """Axis sets of size at most ``l`` keeping the covering number at least ``l``.

    Needs ``Mc(A) >= |M| l``.  The greedy independent points then number at
    least ``l``; the first ``l`` of them, projected to each axis, give the box.
    """
    if l <= 0:
        return _trivial(A, "linear")
    need = len(M) * l
    if not covering_at_least(A, M, need):
        mc = _mc_for_message(A, M)
        raise HypothesisNotMet(f"covering number {mc} is below |M|*l = {need}", mc, need)
    chosen = independence_greedy(A, M).witness.points[:l]
    assert len(chosen) == l, "greedy independence fell short of Mc(A)/|M|"
    axis_sets = [{p[j] for p in chosen} for j in range(A.d)]
    r = restrict(A, axis_sets)
    assert max(r.sizes()) <= l
    value, exact = _verify(r.induced, M)
    return RestrictionCertificate(
        r, l, value, "linear", exact, {"independent_points": [list(p) for p in chosen]}
    )


@dataclass(frozen=True)
class ColoringResult:
    axis_sets: tuple[frozenset[int], ...]
    captured: LatticeSubset
    colors: tuple[int, ...]
    guarantee: Fraction

    def to_dict(self) -> dict:
        return {
            "axis_sets": [sorted(x) for x in self.axis_sets],
            "captured": [list(p) for p in self.captured],
            "colors": list(self.colors),
            "guarantee": str(self.guarantee),
        }


def disjoint_coloring(A: LatticeSubset, method: str = "derandomized", seed: int | None = None) -> ColoringResult:
    """Colour the shared coordinate range [max n_j] with d colours; X_j = colour class j.

    A point with distinct coordinates lands in X_1 x ... x X_d with probability
    d^-d under a uniform colouring.  ``derandomized`` fixes colours one
    coordinate at a time, keeping the conditional expectation of the captured
    count from decreasing, so at least ``|A minus E| / d^d`` points are always
    captured.  ``sampled`` draws a seeded uniform colouring instead.
    """
    d = A.d
    n = max(A.shape.dims)
    off = off_diagonal_part(A).points
    colors = [0] * (n + 1)
    if method == "sampled":
        rng = random.Random(seed)
        for i in range(1, n + 1):
            colors[i] = rng.randint(1, d)
    elif method == "derandomized":
        # unassigned[k]: coordinates of off[k] still uncoloured; alive[k]: still capturable
        unassigned = [d] * len(off)
        alive = [True] * len(off)
        where: dict[int, list[tuple[int, int]]] = {}
        for k, x in enumerate(off):
            for j, v in enumerate(x, start=1):
                where.setdefault(v, []).append((k, j))
        for i in range(1, n + 1):
            # Only points using coordinate i react to its colour; a live point
            # with u uncoloured coordinates contributes d^-(u-1) if coloured right.
            score = [0] * (d + 1)
            for k, j in where.get(i, ()):
                if alive[k]:
                    score[j] += d ** (d - unassigned[k] + 1)
            c = max(range(1, d + 1), key=lambda j: (score[j], -j))
            colors[i] = c
            for k, j in where.get(i, ()):
                unassigned[k] -= 1
                if j != c:
                    alive[k] = False
    else:
        raise ValueError(f"unknown colouring method {method!r}")
    axis_sets = tuple(
        frozenset(i for i in range(1, nj + 1) if colors[i] == j)
        for j, nj in enumerate(A.shape.dims, start=1)
    )
    captured = restrict(A, axis_sets).induced
    return ColoringResult(axis_sets, captured, tuple(colors[1:]), Fraction(len(off), d**d))


def restrict_offdiagonal(
    A: LatticeSubset, M: PatternFamily, l: int, method: str = "derandomized", seed: int | None = None
) -> RestrictionCertificate:
    """Pairwise-disjoint axis sets keeping the covering number at least ``l``.

    Needs ``Mc(A minus E) >= d^d |M| l``: take ``d^d l`` greedy independent
    off-diagonal points, then colour them so that ``l`` land in the box.
    """
    if l <= 0:
        return _trivial(A, "offdiag")
    d = A.d
    off = off_diagonal_part(A)
    need = d**d * len(M) * l
    if not covering_at_least(off, M, need):
        mc = _mc_for_message(off, M)
        raise HypothesisNotMet(
            f"off-diagonal covering number {mc} is below d^d*|M|*l = {need}", mc, need
        )
    chosen = independence_greedy(off, M).witness.points[: d**d * l]
    sub = LatticeSubset._trusted(A.shape, chosen)
    col = disjoint_coloring(sub, method, seed)
    if method == "sampled" and len(col.captured) < l:
        log.info("sampled colouring captured %d < %d points; using derandomized", len(col.captured), l)
        col = disjoint_coloring(sub, "derandomized")
        method = "derandomized"
    assert len(col.captured) >= l
    r = restrict(A, col.axis_sets)
    value, exact = _verify(r.induced, M)
    return RestrictionCertificate(
        r, l, value, "offdiag", exact,
        {"coloring": method, "captured": [list(p) for p in col.captured]},
    )


def trim_to_cover(A: LatticeSubset, M: PatternFamily, target: int) -> LatticeSubset:
    """Drop lexicographically last points until the covering number equals ``target``.

    Removing one point lowers the covering number by at most one, so the last
    point can always go while the number exceeds the target; the result is
    the longest prefix of A with covering number ``target``, found by bisection.
    """
    pts = A.points
    if covering_number_exact(A, M).value <= target:
        return A
    lo, hi = 0, len(pts)  # Mc(prefix lo) <= target < Mc(prefix hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if covering_number_exact(LatticeSubset._trusted(A.shape, pts[:mid]), M).value <= target:
            lo = mid
        else:
            hi = mid
    return LatticeSubset._trusted(A.shape, pts[:lo])


@dataclass
class DescentTreeNode:
    subset: LatticeSubset
    depth: int
    chosen_subspace: Subspace | None = None
    star_value: int | None = None
    children: list["DescentTreeNode"] = field(default_factory=list)
    leaf_reason: str | None = None
    axis_sets: tuple[frozenset[int], ...] = ()
    sub_tree: "DescentTreeNode | None" = None

    def nodes(self):
        yield self
        for ch in self.children:
            yield from ch.nodes()

    def to_dict(self) -> dict:
        out = {
            "depth": self.depth,
            "subset": [list(p) for p in self.subset],
            "leaf_reason": self.leaf_reason,
            "axis_sets": [sorted(x) for x in self.axis_sets],
        }
        if self.chosen_subspace is not None:
            out["chosen_subspace"] = self.chosen_subspace.to_dict()
            out["star_value"] = self.star_value
        if self.sub_tree is not None:
            out["sub_tree"] = self.sub_tree.to_dict()
        out["children"] = [ch.to_dict() for ch in self.children]
        return out


def same_cover_size_bound(d: int, l: int, m: int) -> int:
    """Axis-set size bound J(d, l, m) for the same-covering restriction (m = |M|)."""
    if l <= 0:
        return 0
    if d == 1:
        return l
    inner = max(same_cover_size_bound(c, l + 1, c) for c in range(1, d))
    return sum(m**i for i in range(l + 1)) * inner + m**l * l**d


def _project_to(C: Pattern, trace: LatticeSubset) -> tuple[LatticeSubset, list[int]]:
    axes = list(axes_of(C))
    shape = LatticeShape([trace.shape.dims[j - 1] for j in axes])
    pts = [tuple(p[j - 1] for j in axes) for p in trace]
    return LatticeSubset._trusted(shape, pts), axes


def _remap_star(C: Pattern, d: int) -> PatternFamily:
    axes = list(axes_of(C))
    pos = {j: k for k, j in enumerate(axes)}
    pats = []
    for b in star_family(C, d):
        m = 0
        for j in axes_of(b):
            m |= 1 << pos[j]
        pats.append(m)
    return PatternFamily(len(axes), pats)


def _build_tree(A: LatticeSubset, M: PatternFamily, l: int, depth: int) -> DescentTreeNode:
    node = DescentTreeNode(A, depth)
    d = A.d
    if depth >= l:
        node.leaf_reason = "depth-limit"
        node.axis_sets = tuple(frozenset() for _ in range(d))
        return node
    probe = forced_subspace_probe(A, M, l)
    if probe is None:
        node.leaf_reason = "case-2"
        node.axis_sets = A.projections()
        return node
    S = probe.subspace
    node.chosen_subspace = S
    node.star_value = probe.star_value
    projected, axes = _project_to(S.pattern, probe.trace)
    sub_cert, sub_tree = _same_cover(projected, _remap_star(S.pattern, d), l + 1)
    node.sub_tree = sub_tree
    xs = [frozenset([f]) if f else frozenset() for f in S.fixed]
    for k, j in enumerate(axes):
        xs[j - 1] = sub_cert.axis_sets[k]
    node.axis_sets = tuple(xs)
    for S2 in supersets_in_family(S, M):
        rest = A.filter(lambda p, S2=S2: not S2.contains(p))
        node.children.append(_build_tree(rest, M, l, depth + 1))
    return node


def _same_cover(A: LatticeSubset, M: PatternFamily, l: int) -> tuple[RestrictionCertificate, DescentTreeNode]:
    d = A.d
    A = trim_to_cover(A, M, l)
    if l == 0:
        root = DescentTreeNode(A, 0, leaf_reason="case-2", axis_sets=tuple(frozenset() for _ in range(d)))
        return RestrictionCertificate(restrict(A, [()] * d), 0, 0, "same-cover"), root
    if M.contains_full():
        # Covering number is at most one here; a single point keeps it.
        p = A.points[0]
        root = DescentTreeNode(A, 0, leaf_reason="case-2", axis_sets=tuple(frozenset([x]) for x in p))
        r = restrict(A, root.axis_sets)
        return RestrictionCertificate(r, l, covering_number_exact(r.induced, M).value, "same-cover"), root
    root = _build_tree(A, M, l, 0)
    xs = [set() for _ in range(d)]
    for node in root.nodes():
        for j, X in enumerate(node.axis_sets):
            xs[j] |= X
    r = restrict(A, xs)
    value, exact = _verify(r.induced, M)
    bound = same_cover_size_bound(d, l, len(M))
    cert = RestrictionCertificate(
        r, l, value, "same-cover", exact,
        {"trimmed_size": len(A), "size_bound": bound, "tree_nodes": sum(1 for _ in root.nodes())},
    )
    if value != l:
        log.warning("same-cover restriction has covering number %d, expected %d", value, l)
        cert.details["mismatch"] = True
    return cert, root


def restrict_same_cover(
    A: LatticeSubset, M: PatternFamily, l: int | None = None
) -> tuple[RestrictionCertificate, DescentTreeNode]:
    """Bounded-size axis sets on which the covering number stays exactly ``l``.

    ``l`` defaults to ``Mc(A)``; a smaller target first trims A until its
    covering number is exactly ``l`` and the certificate restricts the trimmed
    set.  The descent tree fixes, at each node, a C-subspace whose trace needs
    more than ``l`` subspaces from C* (so any short cover must contain it),
    shrinks that trace with the same construction one order lower, and
    branches over the members of M containing it.
    """
    mc = covering_number_exact(A, M).value
    if l is None:
        l = mc
    elif mc < l:
        raise HypothesisNotMet(f"covering number {mc} is below the target {l}", mc, l)
    cert, tree = _same_cover(A, M, l)
    cert.details["original_value"] = mc
    return cert, tree


@dataclass(frozen=True)
class BoundedSizeReport:
    l: int
    hypothesis_holds: bool
    size: int
    covering_number: int | None
    tau: int
    violating_subspace: Subspace | None = None
    violating_value: int | None = None

    @property
    def bound(self) -> int | None:
        if self.covering_number is None:
            return None
        return self.l**self.tau * self.covering_number

    @property
    def inequality_holds(self) -> bool | None:
        if not self.hypothesis_holds:
            return None
        return self.size <= self.bound

    def to_dict(self) -> dict:
        out = {
            "l": self.l, "hypothesis_holds": self.hypothesis_holds, "size": self.size,
            "covering_number": self.covering_number, "tau": self.tau, "bound": self.bound,
            "inequality_holds": self.inequality_holds,
        }
        if self.violating_subspace is not None:
            out["violating_subspace"] = self.violating_subspace.to_dict()
            out["violating_value"] = self.violating_value
        return out


def hypothesis_level(A: LatticeSubset, M: PatternFamily) -> int:
    """Largest C*-covering number of a trace of A on a C-subspace, C inside a member of M.

    The bounded-size hypothesis holds exactly for ``l`` at least this value.
    """
    best = 0
    for C in sub_patterns(M):
        star = star_family(C, M.d)
        for _, trace in enumerate_subspaces_meeting(A, M, [C]):
            if len(trace) > best:
                best = max(best, covering_number_exact(trace, star).value)
    return best


def bounded_size_check(A: LatticeSubset, M: PatternFamily, l: int) -> BoundedSizeReport:
    """Scan every C-subspace trace; if all need at most ``l`` C*-subspaces, check
    ``|A| <= l^tau Mc(A)``."""
    tau = M.tau
    for C in sub_patterns(M):
        star = star_family(C, M.d)
        for S, trace in enumerate_subspaces_meeting(A, M, [C]):
            if len(trace) > l and covering_at_least(trace, star, l + 1):
                value = covering_number_exact(trace, star).value
                return BoundedSizeReport(l, False, len(A), None, tau, S, value)
    mc = covering_number_exact(A, M).value
    report = BoundedSizeReport(l, True, len(A), mc, tau)
    if not report.inequality_holds:
        log.error("size bound falsified: |A|=%d > %d = l^tau Mc(A)", len(A), report.bound)
    return report


@dataclass(frozen=True)
class SearchResult:
    restriction: Restriction
    value: int
    evaluated: int

    def to_dict(self) -> dict:
        return {"value": self.value, "evaluated": self.evaluated, **self.restriction.to_dict()}


def optimal_restriction_search(
    A: LatticeSubset, M: PatternFamily, caps: Sequence[int], budget: int = DEFAULT_SEARCH_BUDGET
) -> SearchResult:
    """Exhaustively find axis sets with ``|X_j| <= caps[j]`` maximizing the induced covering number.

    By monotonicity only sets of size exactly ``min(cap_j, n_j)`` are tried;
    the first maximizer in lexicographic order of the axis sets is returned.
    """
    sizes = [min(int(c), n) for c, n in zip(caps, A.shape.dims)]
    total = math.prod(math.comb(n, s) for n, s in zip(A.shape.dims, sizes))
    if total > budget:
        raise CapacityError(f"{total} candidate boxes exceed the search budget {budget}")
    ceiling = covering_number_exact(A, M).value
    best: Restriction | None = None
    best_value = -1
    evaluated = 0
    choices = [itertools.combinations(range(1, n + 1), s) for n, s in zip(A.shape.dims, sizes)]
    for xs in itertools.product(*choices):
        r = restrict(A, xs)
        if len(r.induced) <= best_value:
            continue
        evaluated += 1
        v = covering_number_exact(r.induced, M).value
        if v > best_value:
            best, best_value = r, v
            if v == ceiling:
                break
    if best is None:
        best, best_value = restrict(A, [()] * A.d), 0
    return SearchResult(best, best_value, evaluated)
