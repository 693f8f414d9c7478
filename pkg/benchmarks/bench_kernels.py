"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends get identical inputs and must return identical values; the
script aborts on any disagreement.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from latcover import kernels
from latcover.cover import _candidates, _greedy_pick
from latcover.lattice import LatticeShape, LatticeSubset
from latcover.subspaces import line_family, share_subspace, slice_family
from latcover.tensors import _rank_tables


def cover_case(shape, n_points, family, seed):
    rng = random.Random(seed)
    shape = LatticeShape(shape)
    A = LatticeSubset._trusted(shape, rng.sample(list(shape.points()), n_points))
    masks = [m for _, m in _candidates(A, family)]
    g = _greedy_pick(len(A), masks)
    return (len(A), masks, len(g), g, 0)


def mis_case(shape, n_points, family, seed):
    rng = random.Random(seed)
    shape = LatticeShape(shape)
    pts = sorted(rng.sample(list(shape.points()), n_points))
    adj = [0] * len(pts)
    for i, p in enumerate(pts):
        for j, q in enumerate(pts):
            if i != j and share_subspace(p, q, family):
                adj[i] |= 1 << j
    return (len(pts), adj, 0)


def split_case(p, seed):
    rng = random.Random(seed)
    R = _rank_tables((2, 2, 2), p)
    t = [rng.randrange(p) for _ in range(8)]
    code = sum(x * p**k for k, x in enumerate(t))
    return (*R, t, p, min(r[code] for r in R) + 1)


def rank_case(seed):
    rng = random.Random(seed)
    return ([[rng.randrange(7) for _ in range(40)] for _ in range(40)], 7)


CASES = [
    ("min_cover 60 pts [10]^3 slices", "min_cover", lambda: cover_case((10, 10, 10), 60, slice_family(3), 1)),
    ("min_cover 64 pts [5]^3 lines", "min_cover", lambda: cover_case((5, 5, 5), 64, line_family(3), 2)),
    ("min_cover 30 pts [6]^2 slices", "min_cover", lambda: cover_case((6, 6), 30, slice_family(2), 3)),
    ("max_independent 64 pts [5]^3 lines", "max_independent", lambda: mis_case((5, 5, 5), 64, line_family(3), 4)),
    ("max_independent 50 pts [8]^3 slices", "max_independent", lambda: mis_case((8, 8, 8), 50, slice_family(3), 5)),
    ("split_min3 2x2x2 over F_2", "split_min3", lambda: split_case(2, 6)),
    ("split_min3 2x2x2 over F_3", "split_min3", lambda: split_case(3, 7)),
    ("rank_mod_p 40x40 over F_7", "rank_mod_p", lambda: rank_case(8)),
]


def best_time(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        sys.exit("compiled kernels are not available; build with `pip install -e .`")
    _rank_tables((2, 2, 2), 3)  # table construction is shared, keep it out of the timings
    print(f"{'case':40s} {'compiled':>12s} {'python':>12s} {'speedup':>9s}")
    for name, kernel, make in CASES:
        case = make()
        tc, rc = best_time(getattr(kernels.compiled, kernel), case, args.repeat)
        tp, rp = best_time(getattr(kernels.python, kernel), case, args.repeat)
        if kernel in ("min_cover", "max_independent"):
            same = rc[0] == rp[0]
        else:
            same = rc == rp
        if not same:
            sys.exit(f"backends disagree on {name}: {rc!r} vs {rp!r}")
        print(f"{name:40s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
