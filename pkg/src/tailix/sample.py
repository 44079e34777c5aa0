"""Sample containers, order statistics and the empirical tail function.

Order statistics are 1-indexed, X_{1:n} <= ... <= X_{n:n}; storage is a
0-indexed read-only numpy array.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, KOutOfRange, NonPositiveValue


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RawSample:
    """Positive observations in arrival order."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(np.ravel(self.values))
        if arr.size < 2:
            raise ValueError(f"a sample needs at least 2 values, got {arr.size}")
        bad = np.flatnonzero(~(arr > 0))
        if bad.size:
            i = int(bad[0])
            raise NonPositiveValue(f"value {arr[i]!r} at position {i} is not positive")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class OrderedSample:
    """Ascending order statistics of a positive sample."""

    sorted: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.sorted)
        if arr.size and np.any(arr[1:] < arr[:-1]):
            raise ValueError("OrderedSample values must be ascending")
        object.__setattr__(self, "sorted", arr)

    @property
    def n(self) -> int:
        return int(self.sorted.size)

    def __len__(self):
        return self.n

    @property
    def logs(self) -> np.ndarray:
        # cached: estimator series evaluate many k on one sample
        cached = self.__dict__.get("_logs")
        if cached is None:
            cached = np.log(self.sorted)
            cached.setflags(write=False)
            object.__setattr__(self, "_logs", cached)
        return cached


def sort_sample(raw) -> OrderedSample:
    """Sort observations ascending; duplicates are kept."""
    if not isinstance(raw, RawSample):
        raw = RawSample(np.asarray(raw, dtype=np.float64))
    return OrderedSample(np.sort(raw.values))


def order_statistic(os: OrderedSample, i: int) -> float:
    """Return X_{i:n}, the i-th smallest observation (1-indexed)."""
    if not 1 <= i <= os.n:
        raise IndexOutOfRange(f"order statistic index {i} outside 1..{os.n}")
    return float(os.sorted[i - 1])


def upper_order_statistic(os: OrderedSample, k: int) -> float:
    """Return X_{n-k:n}, the (k+1)-th largest value, for 1 <= k <= n-1."""
    check_k(os.n, k)
    return float(os.sorted[os.n - k - 1])


def empirical_tail(os: OrderedSample, x: float) -> float:
    """Fraction of observations strictly greater than x."""
    above = os.n - int(np.searchsorted(os.sorted, x, side="right"))
    return above / os.n


def check_k(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise KOutOfRange(f"k={k} outside 1..{n - 1} for n={n}")


def pareto_quantile_grid(n: int, alpha: float) -> OrderedSample:
    """Deterministic sample with X_{n-k:n} = (n/k)^(1/alpha) for every 1 <= k <= n-1.

    Values are (n/j)^(1/alpha) for j = 1..n-1 plus a maximum of (2n)^(1/alpha),
    so exactly k observations exceed (n/k)^(1/alpha).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    j = np.arange(n - 1, 0, -1, dtype=np.float64)
    body = (n / j) ** (1.0 / alpha)
    top = (2.0 * n) ** (1.0 / alpha)
    return OrderedSample(np.append(body, top))
