"""Renewal theory for Kendall random walks.

Exact renewal function, moments and distribution of the counting process
through the Williamson transform, a Monte Carlo simulator of the walk, and
finite-level checks of the regular-variation limit theorems.
"""

from .catalog import CATALOG, catalog_lookup
from .errors import (
    CatalogLookupError,
    DegenerateConditionError,
    DivergenceError,
    IntegrationError,
    KendallError,
    OutOfScopeError,
    ParameterError,
    PrecisionWarning,
    RunawayError,
)
from .renewal import moments_N, pgf_N, pmf_N, renewal_R, series_R
from .walk import WalkConfig, mc_renewal_stats, sample_paths, simulate_counts
from .williamson import Fn_cdf, Fn_cdf_many, invert_williamson, moment_H, williamson_G

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CatalogLookupError",
    "DegenerateConditionError",
    "DivergenceError",
    "Fn_cdf",
    "Fn_cdf_many",
    "IntegrationError",
    "KendallError",
    "OutOfScopeError",
    "ParameterError",
    "PrecisionWarning",
    "RunawayError",
    "WalkConfig",
    "catalog_lookup",
    "invert_williamson",
    "mc_renewal_stats",
    "moment_H",
    "moments_N",
    "pgf_N",
    "pmf_N",
    "renewal_R",
    "sample_paths",
    "series_R",
    "simulate_counts",
    "williamson_G",
]
