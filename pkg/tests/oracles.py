"""Brute-force reference implementations, written without the package's solvers.

Each oracle enumerates directly from the definitions: every subspace is
built from its free axes and fixed coordinates, covers are searched by
increasing size over all subspace combinations, and slice rank is a
breadth-first search over sums of slice-rank-one tensors.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def all_subspaces(dims, family, labeled=False):
    """Every subspace of the box for each pattern, as a frozenset of points.

    With ``labeled`` the result is a list with one entry per (pattern, fixed
    coordinates), so equal point sets from different patterns stay distinct.
    """
    d = len(dims)
    out = []
    for free in family:
        free = set(free)
        fixed_axes = [j for j in range(d) if j + 1 not in free]
        for vals in itertools.product(*(range(1, dims[j] + 1) for j in fixed_axes)):
            fix = dict(zip(fixed_axes, vals))
            pts = frozenset(
                p for p in itertools.product(*(range(1, n + 1) for n in dims))
                if all(p[j] == v for j, v in fix.items())
            )
            out.append(pts)
    return out if labeled else set(out)


def brute_cover(dims, points, family):
    """Smallest number of subspaces whose union contains ``points``."""
    A = frozenset(map(tuple, points))
    if not A:
        return 0
    traces = {s & A for s in all_subspaces(dims, family)}
    traces.discard(frozenset())
    # only maximal traces matter
    traces = [t for t in traces if not any(t < u for u in traces)]
    for k in range(1, len(A) + 1):
        for combo in itertools.combinations(traces, k):
            if frozenset().union(*combo) == A:
                return k
    raise AssertionError("unreachable")


def _shares(p, q, family):
    return any(all(p[j] == q[j] for j in range(len(p)) if j + 1 not in set(B)) for B in family)


def brute_independence(points, family):
    """Largest subset with no two points in a common family subspace."""
    pts = [tuple(p) for p in points]
    for k in range(len(pts), 0, -1):
        for combo in itertools.combinations(pts, k):
            if all(not _shares(p, q, family) for p, q in itertools.combinations(combo, 2)):
                return k
    return 0


def brute_matrix_rank(mat, p):
    """Rank as log_p of the size of the row space (enumerated, no elimination)."""
    rows = [tuple(int(x) % p for x in r) for r in mat]
    if not rows:
        return 0
    span = {tuple([0] * len(rows[0]))}
    for r in rows:
        span = {tuple((a + c * b) % p for a, b in zip(v, r)) for v in span for c in range(p)}
    return round(math.log(len(span), p))


def slice_rank_table(shape, p):
    """Slice rank of every tensor of ``shape`` over F_p, by code (row-major, digit k = entry k).

    Level k of the search holds tensors expressible as a sum of k tensors of
    the form a(x_j) * b(other coordinates).
    """
    N = math.prod(shape)
    d = len(shape)
    weights = p ** np.arange(N, dtype=np.int64)
    ones = set()
    for j in range(d):
        rest = [n for i, n in enumerate(shape) if i != j]
        for a in itertools.product(range(p), repeat=shape[j]):
            if not any(a):
                continue
            for b in itertools.product(range(p), repeat=math.prod(rest)):
                if not any(b):
                    continue
                t = np.outer(a, b).reshape([shape[j]] + rest) % p
                t = np.moveaxis(t, 0, j)
                ones.add(int((t.reshape(-1) * weights).sum()))
    ones = sorted(ones)

    def add(c1, c2):
        out, w = 0, 1
        for _ in range(N):
            out += ((c1 % p + c2 % p) % p) * w
            c1 //= p
            c2 //= p
            w *= p
        return out

    total = p**N
    dist = [-1] * total
    dist[0] = 0
    frontier = [0]
    level = 0
    while frontier:
        level += 1
        nxt = []
        for c in frontier:
            for o in ones:
                s = add(c, o)
                if dist[s] < 0:
                    dist[s] = level
                    nxt.append(s)
        frontier = nxt
    return dist


def flat_from_code(code, N, p):
    out = []
    for _ in range(N):
        out.append(code % p)
        code //= p
    return out
