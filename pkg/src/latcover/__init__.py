"""Exact covering numbers of lattice subsets by coordinate subspaces."""

from .cover import (
    CoverResult,
    covering_number,
    covering_number_exact,
    covering_number_greedy,
    enumerate_min_decompositions,
    independence_exact,
    independence_greedy,
    meet_bound_check,
    subspace_covering_closed_form,
)
from .errors import (
    CapacityError,
    HypothesisNotMet,
    LatcoverError,
    PreconditionError,
    RangeError,
    ShapeMismatchError,
)
from .kernels import BACKEND
from .lattice import LatticeShape, LatticeSubset, restrict
from .restrictions import (
    disjoint_coloring,
    restrict_linear,
    restrict_offdiagonal,
    restrict_same_cover,
)
from .subspaces import PatternFamily, Subspace, parse_family, slice_family
from .tensors import FieldTensor, slice_rank_antichain, slice_rank_oracle

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CapacityError", "CoverResult", "FieldTensor", "HypothesisNotMet",
    "LatcoverError", "LatticeShape", "LatticeSubset", "PatternFamily", "PreconditionError",
    "RangeError", "ShapeMismatchError", "Subspace", "covering_number", "covering_number_exact",
    "covering_number_greedy", "disjoint_coloring", "enumerate_min_decompositions",
    "independence_exact", "independence_greedy", "meet_bound_check", "parse_family",
    "restrict", "restrict_linear", "restrict_offdiagonal", "restrict_same_cover",
    "slice_family", "slice_rank_antichain", "slice_rank_oracle", "subspace_covering_closed_form",
]
