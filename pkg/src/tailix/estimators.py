"""Tail-index estimators built on a single order statistic, plus Hill and moment.

The single-order-statistic estimator reads the Pareto quantile plot at one
point: alpha_hat = log(n/k) / log X_{n-k:n}. Hill and the Dekkers-Einmahl-de
Haan moment estimator are implemented exactly as the classical formulas, which
estimate gamma = 1/alpha; the ``*_recip`` selectors put them on the alpha scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateDenominator, DegenerateMoments, KOutOfRange
from .sample import OrderedSample, check_k

# a log carries ~1 ulp of absolute error from rounding its argument plus ~1 ulp
# of its own magnitude; sums inside that band are cancellation noise
_CANCEL_ULPS = 4.0


@dataclass(frozen=True)
class ScaleAssumption:
    C: float

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"tail scale C must be positive, got {self.C}")


@dataclass(frozen=True)
class VariantShiftConfig:
    C1: float = 0.0
    C2: float = 0.0


@dataclass(frozen=True)
class VariantAverageConfig:
    k1: int
    k2: int

    def __post_init__(self):
        if not 1 <= self.k1 < self.k2:
            raise ValueError(f"need 1 <= k1 < k2, got k1={self.k1}, k2={self.k2}")


def _log_upper(os: OrderedSample, k: int) -> float:
    check_k(os.n, k)
    return float(os.logs[os.n - k - 1])


def _cancel_sum(a: float, b: float) -> float:
    s = a + b
    if abs(s) <= _CANCEL_ULPS * np.finfo(float).eps * (1.0 + max(abs(a), abs(b))):
        return 0.0
    return s


def cadena_basic(os: OrderedSample, k: int) -> float:
    """log(n/k) / log X_{n-k:n}.

    Negative when X_{n-k:n} < 1; returned unclamped.
    """
    denom = _log_upper(os, k)
    if denom == 0.0:
        raise DegenerateDenominator(f"log X_(n-k:n) = 0 at k={k}", k=k)
    return math.log(os.n / k) / denom


def cadena_scaled(os: OrderedSample, k: int, scale: ScaleAssumption | float) -> float:
    """(log(n/k) + log C) / log X_{n-k:n}; exactly 0 when k = n*C."""
    C = scale.C if isinstance(scale, ScaleAssumption) else float(scale)
    if not C > 0:
        raise ValueError(f"tail scale C must be positive, got {C}")
    denom = _log_upper(os, k)
    if denom == 0.0:
        raise DegenerateDenominator(f"log X_(n-k:n) = 0 at k={k}", k=k)
    if C == 1.0:
        return math.log(os.n / k) / denom
    num = _cancel_sum(math.log(os.n / k), math.log(C))
    return 0.0 if num == 0.0 else num / denom


def variant_shift(os: OrderedSample, k: int, cfg: VariantShiftConfig) -> float:
    """(C1 + log(n/k)) / (C2 + log X_{n-k:n})."""
    if cfg.C1 == 0.0 and cfg.C2 == 0.0:
        return cadena_basic(os, k)
    denom = _cancel_sum(cfg.C2, _log_upper(os, k))
    if denom == 0.0:
        raise DegenerateDenominator(f"C2 + log X_(n-k:n) = 0 at k={k}", k=k)
    num = _cancel_sum(cfg.C1, math.log(os.n / k))
    return 0.0 if num == 0.0 else num / denom


def variant_average(os: OrderedSample, cfg: VariantAverageConfig) -> float:
    """Mean of cadena_basic over k = k1..k2 inclusive."""
    check_k(os.n, cfg.k2)
    values = [cadena_basic(os, k) for k in range(cfg.k1, cfg.k2 + 1)]
    return math.fsum(values) / len(values)


def _log_excess(os: OrderedSample, k: int) -> np.ndarray:
    logs = os.logs
    n = os.n
    return logs[n - k:] - logs[n - k - 1]


def hill(os: OrderedSample, k: int) -> float:
    """Mean log-excess of the top k observations over X_{n-k:n}."""
    check_k(os.n, k)
    return float(np.mean(_log_excess(os, k)))


def moment_stat(os: OrderedSample, k: int, j: int) -> float:
    """M^(j) = mean of (log X_{n-i:n} - log X_{n-k:n})^j over i = 0..k-1."""
    if j not in (1, 2):
        raise ValueError(f"moment order must be 1 or 2, got {j}")
    if j == 1:
        return hill(os, k)
    check_k(os.n, k)
    return float(np.mean(_log_excess(os, k) ** 2))


def dedh_moment(os: OrderedSample, k: int) -> float:
    """M1 + 1 - 0.5 / (1 - M1^2 / M2)."""
    m1 = moment_stat(os, k, 1)
    m2 = moment_stat(os, k, 2)
    if m2 == 0.0:
        raise DegenerateMoments(f"second log-moment is zero at k={k}")
    gap = 1.0 - m1 * m1 / m2
    if abs(gap) <= 1e-12:
        raise DegenerateMoments(f"M1^2 equals M2 at k={k}")
    return m1 + 1.0 - 0.5 / gap


def _reciprocal(value: float, k: int) -> float:
    if value == 0.0:
        raise DegenerateDenominator(f"estimate is zero at k={k}, reciprocal undefined", k=k)
    return 1.0 / value


def hill_recip(os: OrderedSample, k: int) -> float:
    return _reciprocal(hill(os, k), k)


def moment_recip(os: OrderedSample, k: int) -> float:
    return _reciprocal(dedh_moment(os, k), k)


# selector name -> callable(os, k, **params)
ESTIMATORS: dict[str, Callable[..., float]] = {
    "cadena": lambda os, k: cadena_basic(os, k),
    "cadena-scaled": lambda os, k, C=1.0: cadena_scaled(os, k, C),
    "shift": lambda os, k, C1=0.0, C2=0.0: variant_shift(os, k, VariantShiftConfig(C1, C2)),
    "average": lambda os, k, width=1: variant_average(os, VariantAverageConfig(k, k + width)),
    "hill": hill,
    "hill-recip": hill_recip,
    "moment": dedh_moment,
    "moment-recip": moment_recip,
}


@dataclass(frozen=True)
class EstimatorSpec:
    """An estimator selector with its parameters, e.g. ("cadena-scaled", {"C": 0.1})."""

    tag: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.tag!r}; choose from {sorted(ESTIMATORS)}")

    def __call__(self, os: OrderedSample, k: int) -> float:
        return ESTIMATORS[self.tag](os, k, **self.params)


@dataclass(frozen=True, eq=False)
class EstimateSeries:
    """Estimates over a k-grid; NaN marks k where the estimator is undefined."""

    estimator_tag: str
    params: dict
    ks: np.ndarray
    values: np.ndarray

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def __len__(self):
        return int(self.ks.size)

    def points(self) -> list[tuple[int, float | None]]:
        return [(int(k), None if math.isnan(v) else float(v)) for k, v in zip(self.ks, self.values)]

    def at(self, k: int) -> float | None:
        idx = np.flatnonzero(self.ks == k)
        if not idx.size:
            raise KeyError(k)
        v = float(self.values[idx[0]])
        return None if math.isnan(v) else v


def estimate_series(os: OrderedSample, estimator: EstimatorSpec | str, grid: Sequence[int]) -> EstimateSeries:
    """Evaluate one estimator at every k in grid.

    Degenerate points become NaN instead of aborting the series. The grid itself
    must be valid for n (KOutOfRange propagates).
    """
    if isinstance(estimator, str):
        estimator = EstimatorSpec(estimator)
    ks = np.asarray(list(grid), dtype=np.int64)
    if ks.size and (np.any(np.diff(ks) <= 0)):
        raise ValueError("k-grid must be strictly increasing")
    if ks.size and (ks[0] < 1 or ks[-1] > os.n - 1):
        raise KOutOfRange(f"k-grid spans {ks[0]}..{ks[-1]}, allowed 1..{os.n - 1}")
    values = np.empty(ks.size)
    for idx, k in enumerate(ks):
        try:
            values[idx] = estimator(os, int(k))
        except (DegenerateDenominator, DegenerateMoments):
            values[idx] = np.nan
        except KOutOfRange:
            # "average" reaches past n-1 near the top of the grid
            if estimator.tag != "average":
                raise
            values[idx] = np.nan
    values.setflags(write=False)
    ks.setflags(write=False)
    return EstimateSeries(estimator.tag, dict(estimator.params), ks, values)


def default_k_grid(n: int, C: float | None = None, dense_until: int = 100, ratio: float = 1.05) -> list[int]:
    """Every k up to ``dense_until``, then geometric spacing up to n-1.

    k = round(n*C) is always included when it lies in 1..n-1.
    """
    top = n - 1
    if top < 1:
        raise KOutOfRange(f"no admissible k for n={n}")
    ks = set(range(1, min(dense_until, top) + 1))
    x = float(dense_until)
    while x < top:
        x *= ratio
        ks.add(min(int(round(x)), top))
    ks.add(top)
    if C is not None:
        kc = int(round(n * C))
        if 1 <= kc <= top:
            ks.add(kc)
    return sorted(ks)
