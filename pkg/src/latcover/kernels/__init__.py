"""Hot search kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports and ``LATCOVER_PURE_PYTHON`` is
unset.  The compiled set-cover and independence kernels store point sets in
64-bit words; larger instances are routed to the Python kernels, which use
arbitrary-precision ints.
"""

from __future__ import annotations

import os

from . import _pykernels as python

try:
    if os.environ.get("LATCOVER_PURE_PYTHON"):
        raise ImportError("pure-Python kernels forced by LATCOVER_PURE_PYTHON")
    from . import _ckernels as compiled
except ImportError:
    compiled = None

BACKEND = compiled.BACKEND if compiled is not None else python.BACKEND
_WORD = 64


def min_cover(n, sets, best, best_solution, node_limit=0):
    if compiled is not None and n <= _WORD:
        return compiled.min_cover(n, sets, best, best_solution, node_limit)
    return python.min_cover(n, sets, best, best_solution, node_limit)


def max_independent(n, adj, node_limit=0):
    if compiled is not None and n <= _WORD:
        return compiled.max_independent(n, adj, node_limit)
    return python.max_independent(n, adj, node_limit)


def rank_mod_p(rows, p):
    if compiled is not None:
        return compiled.rank_mod_p(rows, p)
    return python.rank_mod_p(rows, p)


def split_min3(R1, R2, R3, t_digits, p, best):
    if compiled is not None:
        return compiled.split_min3(R1, R2, R3, t_digits, p, best)
    return python.split_min3(R1, R2, R3, t_digits, p, best)


__all__ = ["BACKEND", "compiled", "python", "min_cover", "max_independent", "rank_mod_p", "split_min3"]
