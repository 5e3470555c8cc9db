"""Hermitian operators as sums of products of pairs of orthogonal projections."""

from .blockops import (
    BlockRule,
    IndexFamily,
    RuleOperator,
    SpectralPresentation,
    entry,
    inflate,
    match_families,
    split_family,
    window_matrix,
)
from .decomposer import Decomposition, decompose, plan_sectors, verify_decomposition
from .matfactory import make_pq, sharpness_family
from .pairsum import build_pair_sum, verify_pair_sum
from .region import (
    RegionPoint,
    bound_table,
    check_feasibility,
    in_region_a,
    min_sufficient_n,
    nc_bounds,
)

__version__ = "0.1.0"
