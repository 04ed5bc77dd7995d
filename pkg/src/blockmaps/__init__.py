"""blockmaps: exact-arithmetic workbench for block-weighted random planar
maps — eight decomposition schemes, their phase transition, and the
largest-block laws of the associated conditioned Galton-Watson block trees.
"""

from .series import (
    Series,
    UPoly,
    UPolySeries,
    lagrange_coefficient,
    solve_fixed_point,
)
from .schemes import (
    SchemeSpec,
    all_schemes,
    base_series,
    block_series,
    extract_block_series,
    lagrangian,
    load_scheme,
    solve_weighted,
    solve_weighted_bivariate,
)
from .transition import (
    ExponentFit,
    OffspringLaw,
    TransitionPoint,
    exponent_estimate,
    find_critical_u,
    offspring_law,
    singular_point,
)
from .sampler import (
    BlockRecord,
    DegreeSequence,
    ScalingReport,
    decorate_blocks,
    largest_blocks,
    sample_conditioned,
    sample_free_tree,
    scaling_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "Series", "UPoly", "UPolySeries", "lagrange_coefficient",
    "solve_fixed_point",
    "SchemeSpec", "all_schemes", "base_series", "block_series",
    "extract_block_series", "lagrangian", "load_scheme", "solve_weighted",
    "solve_weighted_bivariate",
    "ExponentFit", "OffspringLaw", "TransitionPoint", "exponent_estimate",
    "find_critical_u", "offspring_law", "singular_point",
    "BlockRecord", "DegreeSequence", "ScalingReport", "decorate_blocks",
    "largest_blocks", "sample_conditioned", "sample_free_tree",
    "scaling_experiment",
]
