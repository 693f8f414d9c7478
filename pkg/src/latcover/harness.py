"""Instance generators, theorem-verification suites and empirical searches.

Every suite recomputes both sides of the relation it checks from scratch on
each instance.  A violation on a valid instance is a bug; the CLI exits
non-zero when any report carries one.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .cover import (
    covering_number_exact,
    decomposition_count_bound,
    enumerate_min_decompositions,
    greedy_covers_by_unions,
    independence_exact,
    independence_greedy,
    is_independent,
    meet_bound_check,
    subspace_covering_closed_form,
)
from .errors import CapacityError, HypothesisNotMet
from .lattice import (
    LatticeShape,
    LatticeSubset,
    dominates,
    in_diagonal_sum,
    is_antichain,
    off_diagonal_part,
)
from .restrictions import (
    bounded_size_check,
    disjoint_coloring,
    hypothesis_level,
    optimal_restriction_search,
    restrict_linear,
    restrict_offdiagonal,
    restrict_same_cover,
    same_cover_size_bound,
)
from .subspaces import PatternFamily, Subspace, axes_of
from .tensors import FieldTensor, slice_rank_oracle

EXHAUSTIVE_CAP = 2**20
DEFAULT_BUDGET = int(os.environ.get("LATCOVER_BUDGET", str(10**6)))


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str  # exhaustive | random | diagonal | antichain | custom
    shape: tuple[int, ...]
    density: float = 0.3
    count: int = 100
    seed: int = 0
    max_points: int | None = None
    points: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def describe(self) -> str:
        dims = "x".join(map(str, self.shape))
        if self.kind == "exhaustive":
            return f"exhaustive subsets of [{dims}]"
        if self.kind == "diagonal":
            return f"diagonals l=1..{self.count} in [{dims}]"
        if self.kind == "custom":
            return f"{len(self.points)} custom instances in [{dims}]"
        return f"{self.count} {self.kind} subsets of [{dims}] density={self.density} seed={self.seed}"


def random_subset(shape: LatticeShape, density: float, rng: random.Random, max_points: int | None = None) -> LatticeSubset:
    pts = [p for p in shape.points() if rng.random() < density]
    if max_points is not None and len(pts) > max_points:
        pts = sorted(rng.sample(pts, max_points))
    return LatticeSubset._trusted(shape, pts)


def prune_to_antichain(A: LatticeSubset) -> LatticeSubset:
    """Scan in lexicographic order, keeping points incomparable with all kept ones."""
    kept: list[tuple[int, ...]] = []
    for x in A:
        if not any(dominates(y, x) for y in kept):
            kept.append(x)
    return LatticeSubset._trusted(A.shape, kept)


def diagonal_subset(shape: LatticeShape, l: int) -> LatticeSubset:
    if l > min(shape.dims):
        raise CapacityError(f"diagonal of length {l} does not fit in {shape}")
    return LatticeSubset._trusted(shape, [(i,) * shape.d for i in range(1, l + 1)])


def generate(spec: GeneratorSpec, budget: int = DEFAULT_BUDGET) -> Iterator[LatticeSubset]:
    shape = LatticeShape(spec.shape)
    rng = random.Random(spec.seed)
    if spec.kind == "exhaustive":
        total = 2**shape.volume
        if total > min(budget, EXHAUSTIVE_CAP):
            raise CapacityError(f"{total} subsets exceed the exhaustive cap {min(budget, EXHAUSTIVE_CAP)}")
        pts = list(shape.points())
        for mask in range(total):
            yield LatticeSubset._trusted(shape, [p for i, p in enumerate(pts) if mask >> i & 1])
    elif spec.kind == "random":
        for _ in range(spec.count):
            yield random_subset(shape, spec.density, rng, spec.max_points)
    elif spec.kind == "antichain":
        for _ in range(spec.count):
            yield prune_to_antichain(random_subset(shape, spec.density, rng, spec.max_points))
    elif spec.kind == "diagonal":
        for l in range(1, min(spec.count, min(shape.dims)) + 1):
            yield diagonal_subset(shape, l)
    elif spec.kind == "custom":
        for pts in spec.points:
            yield LatticeSubset(shape, pts)
    else:
        raise ValueError(f"unknown generator kind {spec.kind!r}")


def random_family(d: int, rng: random.Random, exclude_full: bool = False) -> PatternFamily:
    full = (1 << d) - 1
    pool = [b for b in range(full + 1) if not (exclude_full and b == full)]
    k = rng.randint(1, len(pool))
    return PatternFamily(d, rng.sample(pool, k))


@dataclass
class Violation:
    instance: dict
    relation: str
    observed: dict

    def __str__(self) -> str:
        obs = " ".join(f"{k}={v}" for k, v in self.observed.items())
        return f"violation relation={self.relation!r} {obs} instance={self.instance}"


@dataclass
class VerificationReport:
    suite: str
    frame: str
    seed: int
    instances_checked: int = 0
    skipped: int = 0
    violations: list[Violation] = field(default_factory=list)
    partial: bool = False
    runtime: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        head = (
            f"suite={self.suite} frame={self.frame!r} seed={self.seed} "
            f"instances={self.instances_checked} skipped={self.skipped} "
            f"violations={len(self.violations)} partial={self.partial} runtime={self.runtime:.3f}s"
        )
        return "\n".join([head] + [str(v) for v in self.violations])


def _inst(A: LatticeSubset, M: PatternFamily | None = None, **extra) -> dict:
    out = A.to_dict()
    if M is not None:
        out["family"] = M.as_axes()
    out.update(extra)
    return out


# Each check returns (checks performed, violations); 0 checks means skipped.
Check = Callable[[LatticeSubset, PatternFamily, random.Random], tuple[int, list[Violation]]]


def check_diagonal_additivity(A, M, rng):
    if M.contains_full() or len(A) == 0:
        return 0, []
    d = A.d
    sides = [[rng.random() < 0.5 for _ in range(n)] for n in A.shape.dims]
    A1 = A.filter(lambda p: all(sides[j][x - 1] for j, x in enumerate(p)))
    A2 = A.filter(lambda p: not any(sides[j][x - 1] for j, x in enumerate(p)))
    if not in_diagonal_sum(A1, A2):
        return 1, [Violation(_inst(A, M), "generated pair in diagonal sum", {})]
    union = A1.union(A2)
    lhs = covering_number_exact(union, M).value
    rhs1 = covering_number_exact(A1, M).value
    rhs2 = covering_number_exact(A2, M).value
    if lhs != rhs1 + rhs2:
        return 1, [Violation(_inst(union, M, part1=A1.to_dict()["points"]),
                             "Mc(A1 u A2) == Mc(A1) + Mc(A2)", {"union": lhs, "a1": rhs1, "a2": rhs2})]
    return 1, []


def check_closed_form(A, M, rng):
    shape = A.shape
    base = A.points[0] if len(A) else (1,) * shape.d
    out = []
    checks = 0
    for B in range(1 << shape.d):
        S = Subspace(B, tuple(0 if B >> j & 1 else x for j, x in enumerate(base)))
        pts = S.points(shape)
        if len(pts) > 64:
            continue
        checks += 1
        exact = covering_number_exact(pts, M).value
        closed = subspace_covering_closed_form(B, M, shape)
        if exact != closed:
            out.append(Violation(_inst(pts, M, B=list(axes_of(B))), "exact == closed form",
                                 {"exact": exact, "closed_form": closed}))
    return checks, out


def check_meet_bound(A, M1, M2):
    r = meet_bound_check(A, M1, M2)
    bad = []
    if not r.holds or r.intersection_cover.length > r.k1 * r.k2:
        bad.append(Violation(_inst(A, M1, family2=M2.as_axes()), "Mc_meet <= Mc_1 * Mc_2",
                             {"k1": r.k1, "k2": r.k2, "k_meet": r.k,
                              "constructed": r.intersection_cover.length}))
    return bad


def check_linear_restriction(A, M, rng):
    mc = covering_number_exact(A, M).value
    l = mc // len(M)
    if l < 1:
        return 0, []
    cert = restrict_linear(A, M, l)
    if max(cert.restriction.sizes()) > l or cert.verified_value < l:
        return 1, [Violation(_inst(A, M, l=l), "|X_j| <= l and Mc(A(X)) >= l",
                             {"sizes": list(cert.restriction.sizes()), "verified": cert.verified_value})]
    return 1, []


def check_offdiag_restriction(A, M, rng):
    d = A.d
    try:
        mc = covering_number_exact(off_diagonal_part(A), M).value
    except CapacityError:
        return 0, []
    l = mc // (d**d * len(M))
    if l < 1:
        return 0, []
    cert = restrict_offdiagonal(A, M, l)
    xs = cert.axis_sets
    disjoint = all(xs[i].isdisjoint(xs[j]) for i in range(d) for j in range(i + 1, d))
    if not disjoint or cert.verified_value < l:
        return 1, [Violation(_inst(A, M, l=l), "X_j pairwise disjoint and Mc(A(X)) >= l",
                             {"disjoint": disjoint, "verified": cert.verified_value})]
    return 1, []


def _is_diagonal(A: LatticeSubset) -> bool:
    return len(A) > 0 and A.points == tuple((i,) * A.d for i in range(1, len(A) + 1))


def check_decomposition_count(A, M, rng):
    en = enumerate_min_decompositions(A, M, cap=200)
    l = en.length
    out = []
    if en.count > decomposition_count_bound(M, l, A.d):
        out.append(Violation(_inst(A, M), "count <= (|M| l^d)^l", {"count": en.count, "bound": en.bound}))
    if not all(t.covers(A) and t.length == l for t in en.tuples):
        out.append(Violation(_inst(A, M), "every emitted tuple covers A", {}))
    if _is_diagonal(A) and not M.contains_full():
        expected = math.factorial(l) * len(M) ** l
        if en.count != expected:
            out.append(Violation(_inst(A, M), "count == l! |M|^l on diagonals",
                                 {"count": en.count, "expected": expected}))
    return 1, out


def check_same_cover(A, M, rng):
    if len(A) == 0:
        return 0, []
    cert, _ = restrict_same_cover(A, M)
    l = cert.claimed_lower_bound
    bound = same_cover_size_bound(A.d, l, len(M))
    if cert.verified_value != l or max(cert.restriction.sizes()) > bound:
        return 1, [Violation(_inst(A, M), "Mc(A(X)) == l and |X_j| <= J(d,l,M)",
                             {"l": l, "verified": cert.verified_value,
                              "sizes": list(cert.restriction.sizes()), "bound": bound})]
    return 1, []


def check_greedy_independence(A, M, rng):
    g = independence_greedy(A, M)
    mc = covering_number_exact(A, M).value
    exact = independence_exact(A, M).value
    ok = (
        is_independent(g.witness.points, M)
        and greedy_covers_by_unions(A, M, g.witness)
        and g.value * len(M) >= mc
        and g.value <= exact <= mc
    )
    if not ok:
        return 1, [Violation(_inst(A, M), "independent, covering unions, t >= ceil(Mc/|M|), t <= I <= Mc",
                             {"t": g.value, "mc": mc, "independence": exact})]
    return 1, []


def check_coloring(A, M, rng):
    d = A.d
    first = disjoint_coloring(A)
    second = disjoint_coloring(A)
    xs = first.axis_sets
    need = -(-len(off_diagonal_part(A)) // d**d)
    disjoint = all(xs[i].isdisjoint(xs[j]) for i in range(d) for j in range(i + 1, d))
    if first != second or not disjoint or len(first.captured) < need:
        return 1, [Violation(_inst(A), "deterministic, disjoint, captured >= ceil(|A minus E|/d^d)",
                             {"captured": len(first.captured), "need": need,
                              "disjoint": disjoint, "deterministic": first == second})]
    return 1, []


def check_bounded_size(A, M, rng):
    if len(A) == 0:
        return 0, []
    l = max(1, hypothesis_level(A, M))
    rep = bounded_size_check(A, M, l)
    if not rep.hypothesis_holds or not rep.inequality_holds:
        return 1, [Violation(_inst(A, M, l=l), "|A| <= l^tau Mc(A)", rep.to_dict())]
    return 1, []


def check_sawin_tao(A, M, rng, p: int = 2):
    if A.d not in (2, 3) or not is_antichain(A):
        return 0, []
    values = [1 if p == 2 else rng.randint(1, p - 1) for _ in A]
    T = FieldTensor.from_support(A, p, values)
    try:
        sr = slice_rank_oracle(T).value
    except CapacityError:
        return 0, []
    from .subspaces import slice_family

    mc = covering_number_exact(A, slice_family(A.d)).value
    if sr != mc:
        return 1, [Violation(_inst(A, p=p, values=values), "slice rank == slice covering number",
                             {"slice_rank": sr, "covering": mc})]
    return 1, []


SUITES: dict[str, Check] = {
    "diagonal-additivity": check_diagonal_additivity,
    "closed-form": check_closed_form,
    "meet-bound": None,  # pairs of families, handled in verify_suite
    "linear-restriction": check_linear_restriction,
    "offdiag-restriction": check_offdiag_restriction,
    "decomposition-count": check_decomposition_count,
    "same-cover": check_same_cover,
    "greedy-independence": check_greedy_independence,
    "coloring": check_coloring,
    "bounded-size": check_bounded_size,
    "sawin-tao": None,  # family-independent, handled in verify_suite
}


def verify_suite(
    name: str,
    gen: GeneratorSpec,
    families: Sequence[PatternFamily],
    seed: int | None = None,
    budget: int = DEFAULT_BUDGET,
    p: int = 2,
) -> VerificationReport:
    """Run one named suite over every generated instance and family."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    seed = gen.seed if seed is None else seed
    rng = random.Random(seed)
    report = VerificationReport(name, gen.describe(), seed)
    start = time.perf_counter()
    work = 0
    try:
        for A in generate(gen, budget):
            if work >= budget:
                report.partial = True
                break
            done = 0
            if name == "meet-bound":
                for M1, M2 in itertools.product(families, repeat=2):
                    report.violations += check_meet_bound(A, M1, M2)
                    done += 1
            elif name == "sawin-tao":
                done, bad = check_sawin_tao(A, None, rng, p)
                report.violations += bad
            else:
                for M in families:
                    try:
                        n, bad = SUITES[name](A, M, rng)
                    except (CapacityError, HypothesisNotMet):
                        n, bad = 0, []
                        report.partial = True
                    done += n
                    report.violations += bad
            work += max(done, 1)
            if done:
                report.instances_checked += 1
            else:
                report.skipped += 1
    except CapacityError:
        report.partial = True
    report.runtime = time.perf_counter() - start
    return report


def verify_all(gen: GeneratorSpec, families: Sequence[PatternFamily], seed: int | None = None,
               budget: int = DEFAULT_BUDGET, p: int = 2) -> list[VerificationReport]:
    return [verify_suite(name, gen, families, seed, budget, p) for name in SUITES]


@dataclass
class ConstantSearchResult:
    ratio: Fraction | None
    witness: LatticeSubset | None
    instances: int
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "ratio": None if self.ratio is None else str(self.ratio),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "instances": self.instances,
            "exhaustive": self.exhaustive,
        }


def search_constant(M: PatternFamily, frame: GeneratorSpec, budget: int = DEFAULT_BUDGET) -> ConstantSearchResult:
    """Smallest ``I_M(A) / Mc(A)`` over the frame's non-empty instances, exactly.

    Only an exhaustive frame makes the minimum a true infimum for its shape;
    other frames give an empirical upper envelope on the best constant.
    """
    best: Fraction | None = None
    witness = None
    seen = 0
    for A in generate(frame, budget):
        if len(A) == 0:
            continue
        seen += 1
        ratio = Fraction(independence_exact(A, M).value, covering_number_exact(A, M).value)
        if best is None or ratio < best:
            best, witness = ratio, A
    return ConstantSearchResult(best, witness, seen, frame.kind == "exhaustive")


@dataclass
class HuntResult:
    findings: list[LatticeSubset]
    examined: int
    partial: bool

    def to_dict(self) -> dict:
        return {"findings": [A.to_dict() for A in self.findings], "examined": self.examined,
                "partial": self.partial}


def counterexample_hunt(
    M: PatternFamily, frame: GeneratorSpec, full_value: int, cap_size: int, restricted_cap: int,
    budget: int = DEFAULT_BUDGET,
) -> HuntResult:
    """Instances with ``Mc(A) >= full_value`` whose every box with sides at most
    ``cap_size`` has covering number at most ``restricted_cap``."""
    findings = []
    examined = 0
    partial = False
    caps = [cap_size] * len(frame.shape)
    try:
        for A in generate(frame, budget):
            examined += 1
            if len(A) < full_value or covering_number_exact(A, M).value < full_value:
                continue
            try:
                best = optimal_restriction_search(A, M, caps, budget)
            except CapacityError:
                partial = True
                continue
            if best.value <= restricted_cap:
                findings.append(A)
    except CapacityError:
        partial = True
    return HuntResult(findings, examined, partial)
