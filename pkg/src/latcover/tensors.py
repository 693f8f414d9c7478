"""Tensors over small prime fields: supports, flattening ranks, slice rank.

Slice rank by exhaustive search
-------------------------------
A slice-rank-one term along axis ``j`` is ``a(x_j) b(x_rest)``.  A sum of
``k`` such terms along the same axis has axis-``j`` flattening rank at most
``k``, and conversely any tensor whose axis-``j`` flattening has rank ``k`` is
the sum of ``k`` such terms (write the unfolded matrix as ``k`` rank-one
matrices).  Grouping the terms of a decomposition by axis therefore gives::

    sr(T) = min over T = T_1 + ... + T_d of  sum_j flatrank_j(T_j)

The oracle enumerates the free summands ``T_1 .. T_{d-1}``; the last one is
forced.  This is exponential in the number of entries and is meant for toy
shapes only (2x2x2 over F_2 or F_3).
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .cover import covering_number_exact
from .errors import CapacityError, PreconditionError, RangeError
from .lattice import LatticeShape, LatticeSubset, comparable_pair
from .restrictions import (
    RestrictionCertificate,
    restrict_linear,
    restrict_offdiagonal,
    restrict_same_cover,
)
from .subspaces import slice_family

SUPPORTED_PRIMES = (2, 3, 5, 7)
DEFAULT_ORACLE_BUDGET = 10**8


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise RangeError(f"field size {self.p} not supported; use one of {SUPPORTED_PRIMES}")


class FieldTensor:
    """An immutable dense tensor with residues in ``0 .. p-1``."""

    __slots__ = ("field", "entries")

    def __init__(self, entries, p: int):
        field = PrimeField(int(p))
        arr = np.array(entries, dtype=np.int64) % field.p
        if arr.ndim < 1:
            raise RangeError("a tensor needs at least one axis")
        LatticeShape(arr.shape)  # order and volume limits
        arr.setflags(write=False)
        self.field = field
        self.entries = arr

    @classmethod
    def from_flat(cls, shape: Sequence[int], p: int, flat: Sequence[int]) -> "FieldTensor":
        shape = tuple(int(n) for n in shape)
        if len(flat) != math.prod(shape):
            raise RangeError(f"{len(flat)} entries given for shape {shape}")
        return cls(np.asarray(flat, dtype=np.int64).reshape(shape), p)

    @classmethod
    def from_support(cls, A: LatticeSubset, p: int, values: Sequence[int] | None = None) -> "FieldTensor":
        arr = np.zeros(A.shape.dims, dtype=np.int64)
        for k, x in enumerate(A):
            arr[tuple(c - 1 for c in x)] = 1 if values is None else values[k]
        return cls(arr, p)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def shape(self) -> tuple[int, ...]:
        return self.entries.shape

    @property
    def d(self) -> int:
        return self.entries.ndim

    def flat(self) -> list[int]:
        """Entries in row-major order (last axis fastest)."""
        return [int(x) for x in self.entries.reshape(-1)]

    def scaled(self, c: int) -> "FieldTensor":
        return FieldTensor(self.entries * c, self.p)

    def transposed(self, perm: Sequence[int]) -> "FieldTensor":
        return FieldTensor(np.transpose(self.entries, perm), self.p)

    def __sub__(self, other: "FieldTensor") -> "FieldTensor":
        return FieldTensor(self.entries - other.entries, self.p)

    def __add__(self, other: "FieldTensor") -> "FieldTensor":
        return FieldTensor(self.entries + other.entries, self.p)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldTensor)
            and self.p == other.p
            and self.shape == other.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.entries.tobytes()))

    def to_dict(self) -> dict:
        return {"shape": list(self.shape), "p": self.p, "entries": self.flat()}

    def __repr__(self) -> str:
        return f"FieldTensor(shape={self.shape}, p={self.p}, entries={self.flat()})"


def load_tensor(path: str) -> FieldTensor:
    with open(path) as fh:
        data = json.load(fh)
    return FieldTensor.from_flat(data["shape"], data["p"], data["entries"])


def support(T: FieldTensor) -> LatticeSubset:
    nz = np.argwhere(T.entries != 0) + 1
    return LatticeSubset._trusted(LatticeShape(T.shape), (tuple(int(c) for c in row) for row in nz))


def unfolding(T: FieldTensor, axis: int) -> np.ndarray:
    """The ``n_axis x (product of the other sizes)`` matrix for a 1-based axis."""
    if not 1 <= axis <= T.d:
        raise RangeError(f"axis {axis} outside [1, {T.d}]")
    return np.moveaxis(T.entries, axis - 1, 0).reshape(T.shape[axis - 1], -1)


def rank_mod_p(matrix, p: int) -> int:
    return kernels.rank_mod_p(np.asarray(matrix, dtype=np.int64).tolist(), p)


def flattening_rank(T: FieldTensor, axis: int) -> int:
    return rank_mod_p(unfolding(T, axis), T.p)


@dataclass(frozen=True)
class SliceRankResult:
    value: int
    method: str
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method, "witness": self.witness}


@functools.lru_cache(maxsize=16)
def _rank_tables(shape: tuple[int, ...], p: int) -> tuple[tuple[int, ...], ...]:
    """Axis-wise flattening ranks of every tensor of ``shape``, indexed by code.

    A code is ``sum_k entry_k p^k`` over row-major flat positions ``k``.
    """
    N = math.prod(shape)
    P = p**N
    pw = p ** np.arange(N, dtype=np.int64)
    digits = (np.arange(P, dtype=np.int64)[:, None] // pw[None, :]) % p
    tables = []
    for axis in range(len(shape)):
        moved = np.moveaxis(digits.reshape((P,) + shape), axis + 1, 1).reshape(P, shape[axis], -1)
        tables.append(tuple(kernels.rank_mod_p(m.tolist(), p) for m in moved))
    return tuple(tables)


def _decode(code: int, shape: tuple[int, ...], p: int) -> FieldTensor:
    N = math.prod(shape)
    flat = []
    for _ in range(N):
        flat.append(code % p)
        code //= p
    return FieldTensor.from_flat(shape, p, flat)


def slice_rank_oracle(T: FieldTensor, budget: int = DEFAULT_ORACLE_BUDGET) -> SliceRankResult:
    """Exact slice rank by enumerating splits into per-axis summands.

    Order 2 returns the matrix rank; order 3 searches every split
    ``T = T_1 + T_2 + T_3`` (``p^(2N)`` of them for N entries).
    """
    d = T.d
    if d == 1:
        return SliceRankResult(int(bool(T.entries.any())), "oracle")
    if d == 2:
        return SliceRankResult(flattening_rank(T, 1), "matrix")
    if d > 3:
        raise CapacityError("the exhaustive slice-rank oracle handles order <= 3; use the antichain bridge")
    N = math.prod(T.shape)
    work = T.p ** (N * (d - 1))
    if work > budget:
        raise CapacityError(
            f"{work} splits exceed the oracle budget {budget}; for antichain supports use the bridge"
        )
    R = _rank_tables(T.shape, T.p)
    t = T.flat()
    tcode = sum(x * T.p**k for k, x in enumerate(t))
    baseline = min(r[tcode] for r in R)
    value, c1, c2 = kernels.split_min3(R[0], R[1], R[2], t, T.p, baseline + 1)
    T1, T2 = _decode(c1, T.shape, T.p), _decode(c2, T.shape, T.p)
    T3 = T - T1 - T2
    witness = {
        "summands": [S.flat() for S in (T1, T2, T3)],
        "axis_ranks": [flattening_rank(S, j + 1) for j, S in enumerate((T1, T2, T3))],
    }
    assert sum(witness["axis_ranks"]) == value
    return SliceRankResult(value, "oracle", witness)


def slice_rank_antichain(T: FieldTensor) -> SliceRankResult:
    """Slice rank of a tensor supported on an antichain, as the slice covering number."""
    if T.d < 2:
        raise PreconditionError("the antichain bridge needs order at least 2")
    Z = support(T)
    pair = comparable_pair(Z)
    if pair is not None:
        raise PreconditionError(f"support is not an antichain: {pair[0]} <= {pair[1]}")
    res = covering_number_exact(Z, slice_family(T.d))
    return SliceRankResult(res.value, "antichain-bridge", {"cover": res.witness.to_list()})


def restrict_tensor(T: FieldTensor, axis_sets: Sequence[Sequence[int]]) -> FieldTensor:
    """``T`` restricted to ``X_1 x ... x X_d``, re-indexed by sorted position."""
    idx = [sorted(int(v) - 1 for v in X) for X in axis_sets]
    if len(idx) != T.d:
        raise RangeError(f"expected {T.d} axis sets")
    if any(not X for X in idx):
        raise RangeError("restricting a tensor needs non-empty axis sets")
    return FieldTensor(T.entries[np.ix_(*idx)], T.p)


def restrict_antichain_tensor(T: FieldTensor, mode: str, l: int) -> RestrictionCertificate:
    """Restriction of an antichain-supported tensor keeping slice rank at least ``l``.

    Slice rank equals the slice covering number of the support here, so each
    mode runs the matching covering restriction on the support:

    * ``linear``: needs ``sr T >= d l``; axis sets of size at most ``l``.
    * ``offdiag``: needs the off-diagonal support to have slice covering
      number at least ``d^(d+1) l``; pairwise-disjoint axis sets.
    * ``same-cover``: needs ``sr T >= l``; bounded axis sets.
    """
    if T.d < 2:
        raise PreconditionError("the antichain bridge needs order at least 2")
    Z = support(T)
    pair = comparable_pair(Z)
    if pair is not None:
        raise PreconditionError(f"support is not an antichain: {pair[0]} <= {pair[1]}")
    M = slice_family(T.d)
    if mode == "linear":
        cert = restrict_linear(Z, M, l)
    elif mode == "offdiag":
        cert = restrict_offdiagonal(Z, M, l)
    elif mode == "same-cover":
        cert, _ = restrict_same_cover(Z, M, l)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if l > 0:
        sub = restrict_tensor(T, cert.axis_sets)
        sr = slice_rank_antichain(sub).value
        cert.details["restricted_slice_rank"] = sr
        if sr < l:
            raise AssertionError(f"restricted slice rank {sr} < {l}")
    return cert


__all__ = [
    "PrimeField", "FieldTensor", "SliceRankResult", "load_tensor", "support", "unfolding",
    "rank_mod_p", "flattening_rank", "slice_rank_oracle", "slice_rank_antichain",
    "restrict_tensor", "restrict_antichain_tensor",
]
