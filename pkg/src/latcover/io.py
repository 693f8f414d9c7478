"""JSON file formats for lattice instances (1-based coordinates)."""

from __future__ import annotations

import json
import logging

from .errors import RangeError
from .lattice import LatticeShape, LatticeSubset

log = logging.getLogger(__name__)


def parse_instance(data: dict) -> LatticeSubset:
    """Build a subset from ``{"shape": [...], "points": [[...], ...]}``.

    Duplicate points are dropped with a warning; out-of-range points raise.
    """
    if "shape" not in data or "points" not in data:
        raise RangeError('instance needs "shape" and "points" keys')
    shape = LatticeShape(data["shape"])
    pts = [tuple(int(x) for x in p) for p in data["points"]]
    A = LatticeSubset(shape, pts)
    if len(A) != len(pts):
        log.warning("dropped %d duplicate point(s)", len(pts) - len(A))
    return A


def load_instance(path: str) -> LatticeSubset:
    with open(path) as fh:
        return parse_instance(json.load(fh))


def dump_instance(A: LatticeSubset, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(A.to_dict(), fh)
