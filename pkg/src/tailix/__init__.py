"""Tail-index estimation from a single upper order statistic, with Hill and
moment estimators for comparison and a seeded Monte Carlo harness."""

__version__ = "0.1.0"

__all__ = [
    "DegenerateDenominator",
    "DegenerateMoments",
    "DomainError",
    "EmptyAfterFilter",
    "EstimateSeries",
    "EstimatorSpec",
    "HallTailModel",
    "IndexOutOfRange",
    "KOutOfRange",
    "NonMonotoneTail",
    "NonPositiveValue",
    "OrderedSample",
    "ParetoModel",
    "ParseError",
    "RawSample",
    "RngStream",
    "ScaleAssumption",
    "TailixError",
    "TooManyDegenerate",
    "VariantAverageConfig",
    "VariantShiftConfig",
    "cadena_basic",
    "cadena_scaled",
    "dedh_moment",
    "default_k_grid",
    "empirical_tail",
    "estimate_series",
    "hill",
    "hill_recip",
    "moment_recip",
    "moment_stat",
    "order_statistic",
    "pareto_quantile_grid",
    "sort_sample",
    "variant_average",
    "variant_shift",
]

from .errors import (
    DegenerateDenominator,
    DegenerateMoments,
    DomainError,
    EmptyAfterFilter,
    IndexOutOfRange,
    KOutOfRange,
    NonMonotoneTail,
    NonPositiveValue,
    ParseError,
    TailixError,
    TooManyDegenerate,
)
from .estimators import (
    EstimateSeries,
    EstimatorSpec,
    ScaleAssumption,
    VariantAverageConfig,
    VariantShiftConfig,
    cadena_basic,
    cadena_scaled,
    dedh_moment,
    default_k_grid,
    estimate_series,
    hill,
    hill_recip,
    moment_recip,
    moment_stat,
    variant_average,
    variant_shift,
)
from .sample import (
    OrderedSample,
    RawSample,
    empirical_tail,
    order_statistic,
    pareto_quantile_grid,
    sort_sample,
)
from .sampling import HallTailModel, ParetoModel, RngStream
