"""Pattern families and axis-aligned subspaces.

A pattern ``B`` is a set of free axes, stored as a bitmask with axis ``j``
(1-based) on bit ``j - 1``.  A ``B``-subspace fixes every axis outside ``B``;
it is stored as a tuple ``fixed`` of length d with ``0`` on the free axes, so
structural equality is canonical.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, PreconditionError, RangeError, ShapeMismatchError
from .lattice import LatticeShape, LatticeSubset, Point

Pattern = int


def axes_of(mask: Pattern) -> tuple[int, ...]:
    """1-based axes contained in a pattern bitmask."""
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def mask_of(axes: Iterable[int]) -> Pattern:
    m = 0
    for j in axes:
        m |= 1 << (int(j) - 1)
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def pattern_key(mask: Pattern) -> tuple[int, int]:
    return popcount(mask), mask


@dataclass(frozen=True)
class PatternFamily:
    """A non-empty family M of patterns over ``[d]``, sorted by (order, bitmask)."""

    d: int
    patterns: tuple[Pattern, ...]

    def __init__(self, d: int, patterns: Iterable[Pattern]):
        d = int(d)
        if d < 1:
            raise RangeError("order must be at least 1")
        full = (1 << d) - 1
        pats = sorted(set(int(b) for b in patterns), key=pattern_key)
        if not pats:
            raise PreconditionError("a pattern family must be non-empty")
        for b in pats:
            if b < 0 or b & ~full:
                raise RangeError(f"pattern {axes_of(b)} is not a subset of [{d}]")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "patterns", tuple(pats))

    @classmethod
    def from_axes(cls, d: int, family: Iterable[Iterable[int]]) -> "PatternFamily":
        return cls(d, (mask_of(b) for b in family))

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def __contains__(self, b: Pattern) -> bool:
        return b in self.patterns

    @property
    def full_mask(self) -> Pattern:
        return (1 << self.d) - 1

    @property
    def tau(self) -> int:
        """Largest order of a pattern in the family."""
        return max(popcount(b) for b in self.patterns)

    def contains_full(self) -> bool:
        return self.full_mask in self.patterns

    def maximal(self) -> tuple[Pattern, ...]:
        """Patterns not strictly contained in another member.

        A subspace of a dominated pattern sits inside one of a dominating
        pattern, so the maximal members suffice for building covers.
        """
        return tuple(
            b for b in self.patterns
            if not any(b != c and b & c == b for c in self.patterns)
        )

    def as_axes(self) -> list[list[int]]:
        return [list(axes_of(b)) for b in self.patterns]

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, axes_of(b))) + "}" for b in self.patterns) + "}"


def slice_family(d: int) -> PatternFamily:
    full = (1 << d) - 1
    return PatternFamily(d, (full & ~(1 << j) for j in range(d)))


def point_family(d: int) -> PatternFamily:
    return PatternFamily(d, [0])


def line_family(d: int) -> PatternFamily:
    return PatternFamily(d, (1 << j for j in range(d)))


def full_family(d: int) -> PatternFamily:
    return PatternFamily(d, [(1 << d) - 1])


NAMED_FAMILIES = {
    "slices": slice_family,
    "points": point_family,
    "lines": line_family,
    "full": full_family,
}


def parse_family(spec: str, d: int) -> PatternFamily:
    """Parse a family given by name, inline JSON, or a JSON file path.

    JSON may be a bare list of axis lists or an object with a ``"family"`` key;
    axes are 1-based and ``[]`` is the empty pattern.
    """
    spec = spec.strip()
    if spec in NAMED_FAMILIES:
        return NAMED_FAMILIES[spec](d)
    if os.path.exists(spec):
        with open(spec) as fh:
            data = json.load(fh)
    else:
        try:
            data = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise PreconditionError(
                f"unknown family {spec!r}; use one of {sorted(NAMED_FAMILIES)}, JSON, or a file"
            ) from exc
    if isinstance(data, dict):
        data = data["family"]
    for b in data:
        for j in b:
            if not 1 <= int(j) <= d:
                raise RangeError(f"axis {j} in family is outside [1, {d}]")
    return PatternFamily.from_axes(d, data)


def meet_family(M1: PatternFamily, M2: PatternFamily) -> PatternFamily:
    if M1.d != M2.d:
        raise ShapeMismatchError(f"families over [{M1.d}] and [{M2.d}] cannot be met")
    return PatternFamily(M1.d, (b1 & b2 for b1 in M1 for b2 in M2))


def star_family(C: Pattern, d: int) -> PatternFamily:
    """The family ``{C minus {j} : j in C}`` of one-step-smaller patterns."""
    if C == 0:
        raise PreconditionError("the star family needs a non-empty pattern")
    return PatternFamily(d, (C & ~(1 << (j - 1)) for j in axes_of(C)))


def sub_patterns(M: PatternFamily) -> list[Pattern]:
    """Non-empty C with C contained in some member of M, in (order, bitmask) order."""
    seen = set()
    for b in M:
        c = b
        while c:
            seen.add(c)
            c = (c - 1) & b
    return sorted(seen, key=pattern_key)


@dataclass(frozen=True, order=True)
class Subspace:
    """The ``pattern``-subspace with the fixed coordinates in ``fixed`` (0 = free)."""

    pattern: Pattern
    fixed: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.fixed)

    @property
    def order(self) -> int:
        return popcount(self.pattern)

    def contains(self, p: Sequence[int]) -> bool:
        return all(f == 0 or f == x for f, x in zip(self.fixed, p))

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.pattern & ~self.pattern:
            return False
        return all(f == 0 or f == g for f, g in zip(self.fixed, other.fixed))

    def fixed_coords(self) -> dict[int, int]:
        return {j: v for j, v in enumerate(self.fixed, start=1) if v}

    def points(self, shape: LatticeShape) -> LatticeSubset:
        ranges = [range(1, n + 1) if f == 0 else (f,) for f, n in zip(self.fixed, shape.dims)]
        size = 1
        for r in ranges:
            size *= len(r)
        if size > 2**22:
            raise CapacityError(f"subspace with {size} points is too large to materialize")
        return LatticeSubset._trusted(shape, itertools.product(*ranges))

    def to_dict(self) -> dict:
        return {
            "free_axes": list(axes_of(self.pattern)),
            "fixed_coords": {str(j): v for j, v in self.fixed_coords().items()},
        }

    def __str__(self) -> str:
        return "(" + ",".join("*" if f == 0 else str(f) for f in self.fixed) + ")"


def subspace_through(u: Point, B: Pattern) -> Subspace:
    return Subspace(B, tuple(0 if B >> j & 1 else x for j, x in enumerate(u)))


def subspaces_through(u: Sequence[int], M: PatternFamily, shape: LatticeShape | None = None) -> list[Subspace]:
    """The unique B-subspace through ``u`` for each B in M, in family order."""
    if shape is not None:
        u = shape.check_point(u)
    elif len(u) != M.d:
        raise RangeError(f"point {tuple(u)} does not have {M.d} coordinates")
    return [subspace_through(tuple(u), b) for b in M]


def union_through(u: Sequence[int], M: PatternFamily, shape: LatticeShape) -> LatticeSubset:
    """The union M(u) of all M-subspaces containing ``u``, as a point set."""
    pts: set[Point] = set()
    for S in subspaces_through(u, M, shape):
        pts.update(S.points(shape).points)
    return LatticeSubset._trusted(shape, pts)


def in_union_through(u: Point, x: Point, M: PatternFamily) -> bool:
    """Membership test for M(u) without materializing it."""
    return any(all(B >> j & 1 or a == b for j, (a, b) in enumerate(zip(u, x))) for B in M)


def share_subspace(p: Point, q: Point, M: PatternFamily) -> bool:
    """Whether some M-subspace contains both points (agreement off some B)."""
    return in_union_through(p, q, M)


def enumerate_subspaces_meeting(
    A: LatticeSubset, M: PatternFamily, patterns: Sequence[Pattern] | None = None
) -> list[tuple[Subspace, LatticeSubset]]:
    """Every M-subspace meeting ``A`` paired with its trace on ``A``.

    Ordered by pattern (family order) then by fixed coordinates.
    """
    if A.d != M.d:
        raise ShapeMismatchError(f"family over [{M.d}] used with an order-{A.d} subset")
    out = []
    for B in (M.patterns if patterns is None else patterns):
        groups: dict[tuple[int, ...], list[Point]] = defaultdict(list)
        for p in A:
            groups[subspace_through(p, B).fixed].append(p)
        for fixed in sorted(groups):
            out.append((Subspace(B, fixed), LatticeSubset._trusted(A.shape, groups[fixed])))
    return out
