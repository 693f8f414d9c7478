"""Points, finite subsets and coordinate restrictions of the box [n_1] x ... x [n_d].

Coordinates are 1-based throughout, including in files.  A point is a plain
tuple of ints; a :class:`LatticeSubset` keeps its points deduplicated and in
lexicographic order so every derived result is emitted deterministically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, RangeError, ShapeMismatchError

MAX_ORDER = 8
MAX_VOLUME = 2**24

Point = tuple[int, ...]


@dataclass(frozen=True)
class LatticeShape:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(n) for n in dims)
        if not dims:
            raise RangeError("a lattice shape needs at least one axis")
        if any(n < 1 for n in dims):
            raise RangeError(f"axis sizes must be positive, got {dims}")
        if len(dims) > MAX_ORDER:
            raise CapacityError(f"order {len(dims)} exceeds the supported maximum {MAX_ORDER}")
        if math.prod(dims) > MAX_VOLUME:
            raise CapacityError(f"box volume {math.prod(dims)} exceeds 2^24")
        object.__setattr__(self, "dims", dims)

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def volume(self) -> int:
        return math.prod(self.dims)

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.d and all(1 <= x <= n for x, n in zip(p, self.dims))

    def check_point(self, p: Sequence[int]) -> Point:
        p = tuple(int(x) for x in p)
        if len(p) != self.d:
            raise RangeError(f"point {p} has {len(p)} coordinates, shape has order {self.d}")
        for j, (x, n) in enumerate(zip(p, self.dims), start=1):
            if not 1 <= x <= n:
                raise RangeError(f"coordinate {j} of {p} is outside [1, {n}]")
        return p

    def points(self) -> Iterator[Point]:
        """All points of the box in lexicographic order."""
        return itertools.product(*(range(1, n + 1) for n in self.dims))

    def __str__(self) -> str:
        return "x".join(map(str, self.dims))


@dataclass(frozen=True)
class LatticeSubset:
    shape: LatticeShape
    points: tuple[Point, ...]

    def __init__(self, shape: LatticeShape | Iterable[int], points: Iterable[Sequence[int]] = ()):
        if not isinstance(shape, LatticeShape):
            shape = LatticeShape(shape)
        pts = sorted({shape.check_point(p) for p in points})
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def _trusted(cls, shape: LatticeShape, points: Iterable[Point]) -> "LatticeSubset":
        # Skips range checks; callers guarantee points already lie in shape.
        obj = object.__new__(cls)
        object.__setattr__(obj, "shape", shape)
        object.__setattr__(obj, "points", tuple(sorted(set(points))))
        return obj

    @classmethod
    def full(cls, shape: LatticeShape | Iterable[int]) -> "LatticeSubset":
        if not isinstance(shape, LatticeShape):
            shape = LatticeShape(shape)
        return cls._trusted(shape, shape.points())

    @property
    def d(self) -> int:
        return self.shape.d

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._set

    @property
    def _set(self) -> frozenset[Point]:
        cached = self.__dict__.get("_pointset")
        if cached is None:
            cached = frozenset(self.points)
            object.__setattr__(self, "_pointset", cached)
        return cached

    def _same_shape(self, other: "LatticeSubset") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(f"shapes differ: {self.shape} vs {other.shape}")

    def union(self, other: "LatticeSubset") -> "LatticeSubset":
        self._same_shape(other)
        return LatticeSubset._trusted(self.shape, self.points + other.points)

    def difference(self, other: "LatticeSubset | Iterable[Point]") -> "LatticeSubset":
        drop = other._set if isinstance(other, LatticeSubset) else {tuple(p) for p in other}
        return LatticeSubset._trusted(self.shape, (p for p in self.points if p not in drop))

    def filter(self, keep) -> "LatticeSubset":
        return LatticeSubset._trusted(self.shape, (p for p in self.points if keep(p)))

    def issubset(self, other: "LatticeSubset") -> bool:
        return self._set <= other._set

    def projection(self, axis: int) -> frozenset[int]:
        """Values taken by coordinate ``axis`` (1-based) over the subset."""
        return frozenset(p[axis - 1] for p in self.points)

    def projections(self) -> tuple[frozenset[int], ...]:
        return tuple(self.projection(j) for j in range(1, self.d + 1))

    def to_dict(self) -> dict:
        return {"shape": list(self.shape.dims), "points": [list(p) for p in self.points]}

    def __repr__(self) -> str:
        return f"LatticeSubset({list(self.shape.dims)}, {list(self.points)})"


@dataclass(frozen=True)
class Restriction:
    axis_sets: tuple[frozenset[int], ...]
    induced: LatticeSubset

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.axis_sets)

    def to_dict(self) -> dict:
        return {
            "axis_sets": [sorted(x) for x in self.axis_sets],
            "induced": self.induced.to_dict(),
        }


def restrict(A: LatticeSubset, axis_sets: Sequence[Iterable[int]]) -> Restriction:
    """Intersect ``A`` with the product ``X_1 x ... x X_d``."""
    if len(axis_sets) != A.d:
        raise ShapeMismatchError(f"expected {A.d} axis sets, got {len(axis_sets)}")
    xs = []
    for j, (X, n) in enumerate(zip(axis_sets, A.shape.dims), start=1):
        X = frozenset(int(v) for v in X)
        bad = [v for v in X if not 1 <= v <= n]
        if bad:
            raise RangeError(f"axis {j} values {sorted(bad)} are outside [1, {n}]")
        xs.append(X)
    induced = A.filter(lambda p: all(x in X for x, X in zip(p, xs)))
    return Restriction(tuple(xs), induced)


def has_repeated_coordinate(p: Sequence[int]) -> bool:
    return len(set(p)) < len(p)


def repeated_coordinate_set(shape: LatticeShape | Iterable[int]) -> LatticeSubset:
    """The set E of points whose coordinates are not pairwise distinct."""
    if not isinstance(shape, LatticeShape):
        shape = LatticeShape(shape)
    return LatticeSubset._trusted(shape, (p for p in shape.points() if has_repeated_coordinate(p)))


def off_diagonal_part(A: LatticeSubset) -> LatticeSubset:
    """``A`` minus the repeated-coordinate set, without materializing E."""
    return A.filter(lambda p: not has_repeated_coordinate(p))


def dominates(x: Point, y: Point) -> bool:
    return all(a <= b for a, b in zip(x, y))


def comparable_pair(A: LatticeSubset) -> tuple[Point, Point] | None:
    """First pair ``(x, y)`` of distinct points with x <= y componentwise, if any."""
    pts = A.points
    # Lexicographic order means only later points can dominate earlier ones.
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            if dominates(x, y):
                return x, y
    return None


def is_antichain(A: LatticeSubset) -> bool:
    return comparable_pair(A) is None


def in_diagonal_sum(A1: LatticeSubset, A2: LatticeSubset) -> bool:
    """Whether the two subsets fit in product boxes with disjoint sides.

    Projections are the smallest enclosing products, so disjoint projections
    on every axis decide the question exactly.
    """
    A1._same_shape(A2)
    return all(A1.projection(j).isdisjoint(A2.projection(j)) for j in range(1, A1.d + 1))
