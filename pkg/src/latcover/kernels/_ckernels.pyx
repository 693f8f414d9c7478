# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; mirror ``_pykernels`` exactly (same search order).

Point sets are ``uint64`` bitmasks, so ``min_cover`` and ``max_independent``
accept at most 64 points; callers fall back to the Python kernels above that.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, calloc

BACKEND = "cython"
MAX_BITS = 64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef struct CoverCtx:
    int n
    int m
    uint64_t* sets
    int* ptr            # CSR offsets into idx, one row per point
    int* idx            # sets containing each point
    uint64_t* nb        # union of the sets containing each point
    int best
    int* sol
    int* stack
    long long nodes
    long long node_limit
    int complete


cdef inline int _lower_bound(CoverCtx* c, uint64_t unc) nogil:
    cdef int lb = 0
    cdef int p
    while unc:
        p = __builtin_ctzll(unc)
        lb += 1
        unc &= ~c.nb[p]
    return lb


cdef void _cover_search(CoverCtx* c, uint64_t unc, int depth) nogil:
    cdef int p, pick, fewest, cnt, i, j, k, tmp, g
    cdef uint64_t rem
    cdef int order[512]
    cdef int gain[512]
    c.nodes += 1
    if c.node_limit and c.nodes > c.node_limit:
        c.complete = 0
        return
    if unc == 0:
        if depth < c.best:
            c.best = depth
            for i in range(depth):
                c.sol[i] = c.stack[i]
        return
    if depth + _lower_bound(c, unc) >= c.best:
        return
    pick = -1
    fewest = 1 << 30
    rem = unc
    while rem:
        p = __builtin_ctzll(rem)
        rem &= rem - 1
        cnt = c.ptr[p + 1] - c.ptr[p]
        if cnt < fewest:
            fewest = cnt
            pick = p
    cnt = c.ptr[pick + 1] - c.ptr[pick]
    for k in range(cnt):
        order[k] = c.idx[c.ptr[pick] + k]
        gain[k] = __builtin_popcountll(c.sets[order[k]] & unc)
    # stable insertion sort by descending gain
    for k in range(1, cnt):
        tmp = order[k]
        g = gain[k]
        j = k - 1
        while j >= 0 and gain[j] < g:
            order[j + 1] = order[j]
            gain[j + 1] = gain[j]
            j -= 1
        order[j + 1] = tmp
        gain[j + 1] = g
    for k in range(cnt):
        i = order[k]
        c.stack[depth] = i
        _cover_search(c, unc & ~c.sets[i], depth + 1)
        if not c.complete:
            return


def min_cover(int n, sets, int best, best_solution, long long node_limit=0):
    """See ``_pykernels.min_cover``; requires ``n <= 64``."""
    if n > MAX_BITS:
        raise ValueError("compiled min_cover handles at most 64 points")
    cdef int m = len(sets)
    cdef CoverCtx c
    cdef int p, i, pos
    cdef uint64_t full
    c.n = n
    c.m = m
    c.sets = <uint64_t*>malloc(max(m, 1) * sizeof(uint64_t))
    c.ptr = <int*>calloc(n + 1, sizeof(int))
    c.idx = <int*>malloc(max(m * n, 1) * sizeof(int))
    c.nb = <uint64_t*>calloc(max(n, 1), sizeof(uint64_t))
    c.sol = <int*>malloc((max(m, best) + 1) * sizeof(int))
    c.stack = <int*>malloc((m + 1) * sizeof(int))
    try:
        for i in range(m):
            c.sets[i] = <uint64_t>sets[i]
        pos = 0
        for p in range(n):
            c.ptr[p] = pos
            for i in range(m):
                if (c.sets[i] >> p) & 1:
                    if pos - c.ptr[p] >= 512:
                        raise ValueError("a point lies in more than 512 candidate sets")
                    c.idx[pos] = i
                    c.nb[p] |= c.sets[i]
                    pos += 1
        c.ptr[n] = pos
        c.best = best
        for i in range(len(best_solution)):
            c.sol[i] = best_solution[i]
        c.nodes = 0
        c.node_limit = node_limit
        c.complete = 1
        full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t>1 << n) - 1)
        with nogil:
            _cover_search(&c, full, 0)
        sol = [c.sol[i] for i in range(c.best)] if c.best <= m else list(best_solution)
        return c.best, sol, c.nodes, bool(c.complete)
    finally:
        free(c.sets)
        free(c.ptr)
        free(c.idx)
        free(c.nb)
        free(c.sol)
        free(c.stack)


cdef struct MisCtx:
    uint64_t* adj
    int best
    uint64_t mask
    long long nodes
    long long node_limit
    int complete


cdef void _mis_search(MisCtx* c, uint64_t cand, uint64_t cur, int size) nogil:
    cdef int v, deg, pick, pick_deg, low
    cdef uint64_t rem, bit
    c.nodes += 1
    if c.node_limit and c.nodes > c.node_limit:
        c.complete = 0
        return
    pick = -1
    while cand:
        if size + __builtin_popcountll(cand) <= c.best:
            return
        pick = -1
        pick_deg = -1
        low = -1
        rem = cand
        while rem:
            v = __builtin_ctzll(rem)
            rem &= rem - 1
            deg = __builtin_popcountll(c.adj[v] & cand)
            if deg <= 1:
                low = v
                break
            if deg > pick_deg:
                pick = v
                pick_deg = deg
        if low < 0:
            break
        cur |= (<uint64_t>1) << low
        size += 1
        cand &= ~(c.adj[low] | ((<uint64_t>1) << low))
    if cand == 0:
        if size > c.best:
            c.best = size
            c.mask = cur
        return
    bit = (<uint64_t>1) << pick
    _mis_search(c, cand & ~(c.adj[pick] | bit), cur | bit, size + 1)
    if not c.complete:
        return
    _mis_search(c, cand & ~bit, cur, size)


def max_independent(int n, adj, long long node_limit=0):
    """See ``_pykernels.max_independent``; requires ``n <= 64``."""
    if n > MAX_BITS:
        raise ValueError("compiled max_independent handles at most 64 vertices")
    cdef MisCtx c
    cdef int v
    cdef uint64_t full
    c.adj = <uint64_t*>malloc(max(n, 1) * sizeof(uint64_t))
    try:
        for v in range(n):
            c.adj[v] = <uint64_t>adj[v]
        c.best = 0
        c.mask = 0
        c.nodes = 0
        c.node_limit = node_limit
        c.complete = 1
        full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t>1 << n) - 1)
        with nogil:
            _mis_search(&c, full, 0, 0)
        return c.best, int(c.mask), c.nodes, bool(c.complete)
    finally:
        free(c.adj)


def rank_mod_p(rows, int p):
    """Rank over F_p of an integer matrix given as a sequence of rows."""
    cdef int nr = len(rows)
    if nr == 0:
        return 0
    cdef int nc = len(rows[0])
    cdef int64_t* a = <int64_t*>malloc(max(nr * nc, 1) * sizeof(int64_t))
    cdef int r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp, base, e
    try:
        for i in range(nr):
            row = rows[i]
            for j in range(nc):
                a[i * nc + j] = (<int64_t>int(row[j])) % p
                if a[i * nc + j] < 0:
                    a[i * nc + j] += p
        for c in range(nc):
            piv = -1
            for i in range(r, nr):
                if a[i * nc + c]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(nc):
                    tmp = a[r * nc + j]
                    a[r * nc + j] = a[piv * nc + j]
                    a[piv * nc + j] = tmp
            # inverse by Fermat: a^(p-2)
            inv = 1
            base = a[r * nc + c]
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(nc):
                a[r * nc + j] = (a[r * nc + j] * inv) % p
            for i in range(r + 1, nr):
                f = a[i * nc + c]
                if f:
                    for j in range(nc):
                        a[i * nc + j] = (a[i * nc + j] - f * a[r * nc + j]) % p
                        if a[i * nc + j] < 0:
                            a[i * nc + j] += p
            r += 1
            if r == nr:
                break
        return r
    finally:
        free(a)


def split_min3(R1, R2, R3, t_digits, int p, int best):
    """See ``_pykernels.split_min3``."""
    cdef int P = len(R1)
    cdef int N = len(t_digits)
    cdef int* r1 = <int*>malloc(P * sizeof(int))
    cdef int* r2 = <int*>malloc(P * sizeof(int))
    cdef int* r3 = <int*>malloc(P * sizeof(int))
    cdef unsigned char* dig = <unsigned char*>malloc(P * N * sizeof(unsigned char))
    cdef int* pw = <int*>malloc(N * sizeof(int))
    cdef int rest[64]
    cdef int sub[8][8]
    cdef int c1, c2, k, code, v, a, b, arg1 = -1, arg2 = -1, base
    if N > 64 or p > 8:
        raise ValueError("split_min3 supports at most 64 entries and p <= 7")
    try:
        for c1 in range(P):
            r1[c1] = R1[c1]
            r2[c1] = R2[c1]
            r3[c1] = R3[c1]
        base = 1
        for k in range(N):
            pw[k] = base
            base *= p
        for c1 in range(P):
            code = c1
            for k in range(N):
                dig[c1 * N + k] = code % p
                code //= p
        for a in range(p):
            for b in range(p):
                sub[a][b] = ((a - b) % p + p) % p
        tdig = [int(x) for x in t_digits]
        for c1 in range(P):
            if r1[c1] >= best:
                continue
            for k in range(N):
                rest[k] = sub[tdig[k]][dig[c1 * N + k]]
            with nogil:
                for c2 in range(P):
                    v = r1[c1] + r2[c2]
                    if v >= best:
                        continue
                    code = 0
                    for k in range(N):
                        code += sub[rest[k]][dig[c2 * N + k]] * pw[k]
                    v += r3[code]
                    if v < best:
                        best = v
                        arg1 = c1
                        arg2 = c2
        return best, arg1, arg2
    finally:
        free(r1)
        free(r2)
        free(r3)
        free(dig)
        free(pw)
