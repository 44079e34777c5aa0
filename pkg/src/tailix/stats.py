"""Normal CDF and Kolmogorov-Smirnov distances used by the Monte Carlo suites."""
from __future__ import annotations

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)


def normal_cdf(z):
    """Standard normal CDF via the complementary error function.

    0.5 * erfc(-z / sqrt(2)) is accurate to a few ulps in both tails, well
    inside the 1e-7 absolute error budget.
    """
    if np.ndim(z) == 0:
        return 0.5 * math.erfc(-float(z) / _SQRT2)
    from scipy.special import erfc

    return 0.5 * erfc(-np.asarray(z, dtype=np.float64) / _SQRT2)


def ks_distance(samples, location: float = 0.0, scale: float = 1.0) -> float:
    """One-sample KS distance between samples and N(location, scale^2)."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m == 0:
        raise ValueError("samples must be nonempty")
    cdf = normal_cdf((x - location) / scale)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - cdf), np.max(cdf - (i - 1) / m)))


def ks_two_sample(a, b) -> float:
    """Two-sample KS distance sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_critical(m: int, level: float = 0.01, m2: int | None = None) -> float:
    """Asymptotic KS critical value c(level) * sqrt((m + m2) / (m * m2)).

    With m2 omitted this is the one-sample value c / sqrt(m).
    """
    c = math.sqrt(-0.5 * math.log(level / 2.0))
    if m2 is None:
        return c / math.sqrt(m)
    return c * math.sqrt((m + m2) / (m * m2))
