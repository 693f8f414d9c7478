"""Pure-Python kernels.

Same contract and the same search order as the compiled ``_ckernels`` module,
so both backends return identical values *and* identical witnesses.  Sets of
points are Python ints used as bitmasks, so there is no size limit here.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def min_cover(n, sets, best, best_solution, node_limit=0):
    """Smallest sub-collection of ``sets`` whose union has all ``n`` low bits.

    ``best``/``best_solution`` seed an incumbent (e.g. from greedy); only
    strictly shorter covers replace it.  Returns ``(value, solution, nodes,
    complete)`` where ``complete`` is False if ``node_limit`` cut the search.
    """
    sets = list(sets)
    by_point = [[i for i, s in enumerate(sets) if s >> p & 1] for p in range(n)]
    nb = []
    for p in range(n):
        m = 0
        for i in by_point[p]:
            m |= sets[i]
        nb.append(m)
    counts = [len(c) for c in by_point]

    state = {"best": best, "sol": list(best_solution), "nodes": 0, "complete": True}
    stack: list[int] = []

    def lower_bound(unc):
        lb = 0
        while unc:
            p = (unc & -unc).bit_length() - 1
            lb += 1
            unc &= ~nb[p]
        return lb

    def search(unc, depth):
        state["nodes"] += 1
        if node_limit and state["nodes"] > node_limit:
            state["complete"] = False
            return
        if unc == 0:
            if depth < state["best"]:
                state["best"] = depth
                state["sol"] = stack.copy()
            return
        if depth + lower_bound(unc) >= state["best"]:
            return
        pick, fewest = -1, None
        for p in _bits(unc):
            if fewest is None or counts[p] < fewest:
                pick, fewest = p, counts[p]
        cands = sorted(by_point[pick], key=lambda i: -_popcount(sets[i] & unc))
        for i in cands:
            stack.append(i)
            search(unc & ~sets[i], depth + 1)
            stack.pop()
            if not state["complete"]:
                return

    search((1 << n) - 1, 0)
    return state["best"], state["sol"], state["nodes"], state["complete"]


def max_independent(n, adj, node_limit=0):
    """Maximum independent set of the graph with neighbour bitmasks ``adj``.

    Returns ``(size, mask, nodes, complete)``.
    """
    state = {"best": 0, "mask": 0, "nodes": 0, "complete": True}

    def search(cand, cur, size):
        state["nodes"] += 1
        if node_limit and state["nodes"] > node_limit:
            state["complete"] = False
            return
        # Vertices of degree <= 1 inside cand can be taken without branching.
        while cand:
            if size + _popcount(cand) <= state["best"]:
                return
            pick, pick_deg, low = -1, -1, -1
            for v in _bits(cand):
                deg = _popcount(adj[v] & cand)
                if deg <= 1:
                    low = v
                    break
                if deg > pick_deg:
                    pick, pick_deg = v, deg
            if low < 0:
                break
            cur |= 1 << low
            size += 1
            cand &= ~(adj[low] | (1 << low))
        if cand == 0:
            if size > state["best"]:
                state["best"], state["mask"] = size, cur
            return
        bit = 1 << pick
        search(cand & ~(adj[pick] | bit), cur | bit, size + 1)
        if not state["complete"]:
            return
        search(cand & ~bit, cur, size)

    search((1 << n) - 1, 0, 0)
    return state["best"], state["mask"], state["nodes"], state["complete"]


def rank_mod_p(rows, p):
    """Rank over F_p of an integer matrix given as a sequence of rows."""
    m = [[int(x) % p for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def split_min3(R1, R2, R3, t_digits, p, best):
    """Minimize ``R1[c1] + R2[c2] + R3[t - c1 - c2]`` over base-p codes.

    Codes enumerate every tensor of the shape (digit k = flat entry k); the
    third summand is forced by the other two.  ``best`` is an exclusive upper
    bound.  Returns ``(value, c1, c2)`` for the lexicographically first
    minimizing pair, or ``(best, -1, -1)`` if nothing beats ``best``.
    """
    R1 = np.asarray(R1, dtype=np.int64)
    R2 = np.asarray(R2, dtype=np.int64)
    R3 = np.asarray(R3, dtype=np.int64)
    N = len(t_digits)
    P = len(R1)
    pw = p ** np.arange(N, dtype=np.int64)
    digits = (np.arange(P, dtype=np.int64)[:, None] // pw[None, :]) % p
    t = np.asarray(t_digits, dtype=np.int64)
    arg1 = arg2 = -1
    for c1 in range(P):
        r1 = int(R1[c1])
        if r1 >= best:
            continue
        rest = (t - digits[c1]) % p
        c3 = ((rest[None, :] - digits) % p) @ pw
        vals = r1 + R2 + R3[c3]
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, arg1, arg2 = int(vals[k]), c1, k
    return best, arg1, arg2
