"""Seeded random streams and samplers for the test distributions.

Generator
---------
Every stream is a counter-based SplitMix64 sequence (Steele, Lea & Flood 2014):

    mix(z):  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
             z ^= z >> 27; z *= 0x94D049BB133111EB
             z ^= z >> 31
    key        = mix(seed XOR mix(stream_id + GOLDEN))     GOLDEN = 0x9E3779B97F4A7C15
    word_i     = mix(key + GOLDEN * (i + 1))               i = 0, 1, 2, ... (mod 2**64)
    uniform_i  = ((word_i >> 11) + 0.5) * 2**-53           always inside (0, 1)

so draw i of a stream depends only on (seed, stream_id, i) and any
implementation reproduces the same sequence. The stream keeps a position
counter; successive calls continue where the previous one stopped.

Pareto support
--------------
F(x) = 1 - C x^-alpha vanishes at x = C^(1/alpha), which is the support bound
used here. The form C^(-alpha) that also circulates coincides with it only at
C = 1 and would make F negative near the bound for C > 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonMonotoneTail
from .sample import OrderedSample, RawSample

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO_M53 = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, *labels: int) -> int:
    """Fold integer labels into a seed, e.g. to give each experiment cell its own seed."""
    out = seed & MASK64
    for label in labels:
        out = mix64(out ^ mix64((label + GOLDEN) & MASK64))
    return out


class RngStream:
    """Deterministic uniform stream identified by (seed, stream_id).

    Not safe to share between concurrent consumers; give each replication its
    own stream_id instead.
    """

    __slots__ = ("seed", "stream_id", "position", "_key")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self.position = 0
        self._key = mix64(self.seed ^ mix64((self.stream_id + GOLDEN) & MASK64))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, position={self.position})"

    def words(self, count: int) -> np.ndarray:
        counter = np.arange(self.position + 1, self.position + count + 1, dtype=np.uint64)
        self.position += count
        with np.errstate(over="ignore"):
            state = np.uint64(self._key) + np.uint64(GOLDEN) * counter
            return _mix64_array(state)


def uniform01(stream: RngStream, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("count must be at least 1")
    w = stream.words(count)
    return ((w >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


@dataclass(frozen=True)
class ParetoModel:
    alpha: float
    C: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.C > 0):
            raise ValueError(f"ParetoModel needs alpha > 0 and C > 0, got {self}")

    @property
    def support_lower(self) -> float:
        return self.C ** (1.0 / self.alpha)

    def tail(self, x):
        return self.C * np.power(x, -self.alpha)


def pareto_inverse_cdf(u, model: ParetoModel):
    """Quantile (C / (1 - u))^(1/alpha) of F(x) = 1 - C x^-alpha."""
    u = np.asarray(u, dtype=np.float64)
    if np.any((u < 0) | (u >= 1)):
        raise ValueError("u must lie in [0, 1)")
    out = (model.C / (1.0 - u)) ** (1.0 / model.alpha)
    return float(out) if out.ndim == 0 else out


def sample_pareto(n: int, model: ParetoModel, stream: RngStream) -> RawSample:
    if n < 2:
        raise ValueError("n must be at least 2")
    return RawSample(pareto_inverse_cdf(uniform01(stream, n), model))


@dataclass(frozen=True)
class HallTailModel:
    """Tail C x^-alpha (1 + c x^-(beta (1 + margin))) above its support bound.

    ``coefficient = 0`` is the exact Pareto tail. ``margin > 0`` makes the
    perturbation decay strictly faster than x^-beta.
    """

    alpha: float
    C: float = 1.0
    beta: float = 1.0
    coefficient: float = 0.0
    margin: float = 0.1

    def __post_init__(self):
        if not (self.alpha > 0 and self.C > 0 and self.beta > 0):
            raise ValueError(f"HallTailModel needs alpha, C, beta > 0, got {self}")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")

    @property
    def exponent(self) -> float:
        return self.beta * (1.0 + self.margin)

    @property
    def pareto(self) -> ParetoModel:
        return ParetoModel(self.alpha, self.C)

    def log_tail(self, logx):
        logx = np.asarray(logx, dtype=np.float64)
        base = math.log(self.C) - self.alpha * logx
        if self.coefficient == 0.0:
            return base
        return base + np.log1p(self.coefficient * np.exp(-self.exponent * logx))

    def tail(self, x):
        return np.exp(self.log_tail(np.log(x)))

    def support_lower(self) -> float:
        """Largest x with tail(x) = 1."""
        if self.coefficient == 0.0:
            return self.C ** (1.0 / self.alpha)
        a, c, g = self.alpha, self.coefficient, self.exponent
        t_pareto = math.log(self.C) / a
        if c > 0:
            lo = t_pareto
            hi = (math.log(self.C) + math.log1p(c * math.exp(-g * t_pareto))) / a
        else:
            # tail peaks where its derivative vanishes; the support lies right of it
            t_peak = math.log(-c * (a + g) / a) / g
            if self.log_tail(t_peak) < 0:
                raise NonMonotoneTail(f"tail never reaches 1 on its decreasing branch for {self}")
            lo, hi = t_peak, max(t_pareto, t_peak)
        return math.exp(float(_bisect_log(self, np.array([lo]), np.array([hi]), np.array([0.0]))[0]))

    def check_monotone(self, decades: float = 12.0, points: int = 400) -> float:
        """Raise NonMonotoneTail unless the tail decreases on a grid above the support bound."""
        x0 = self.support_lower()
        logs = math.log(x0) + np.linspace(0.0, decades * math.log(10.0), points)
        with np.errstate(invalid="ignore"):
            lt = self.log_tail(logs)
        if not np.all(np.isfinite(lt)) or np.any(np.diff(lt) > 0):
            raise NonMonotoneTail(f"tail of {self} is not decreasing above x0={x0:g}")
        return x0


def _bisect_log(model: HallTailModel, lo, hi, target, rtol: float = 1e-12):
    """Solve log_tail(t) = target for t in [lo, hi] (log_tail decreasing)."""
    lo = lo.astype(np.float64).copy()
    hi = hi.astype(np.float64).copy()
    width = float(np.max(hi - lo)) if lo.size else 0.0
    if width > 0:
        steps = int(math.ceil(math.log2(width / rtol))) + 1
        for _ in range(max(steps, 1)):
            mid = 0.5 * (lo + hi)
            above = model.log_tail(mid) > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def hall_inverse_tail(v, model: HallTailModel):
    """x with tail(x) = v for v in (0, 1], by bisection in log x."""
    v = np.atleast_1d(np.asarray(v, dtype=np.float64))
    x0 = model.check_monotone()
    logv = np.log(v)
    factor0 = math.log1p(model.coefficient * x0 ** (-model.exponent))
    a = model.alpha
    t_plain = (math.log(model.C) - logv) / a
    t_shift = t_plain + factor0 / a
    lo = np.maximum(np.minimum(t_plain, t_shift), math.log(x0))
    hi = np.maximum(np.maximum(t_plain, t_shift), math.log(x0))
    return np.exp(_bisect_log(model, lo, hi, logv))


def sample_hall(n: int, model: HallTailModel, stream: RngStream) -> RawSample:
    if n < 2:
        raise ValueError("n must be at least 2")
    if model.coefficient == 0.0:
        return sample_pareto(n, model.pareto, stream)
    u = uniform01(stream, n)
    return RawSample(hall_inverse_tail(1.0 - u, model))


def exponential_from_uniform(u):
    """Inverse transform -log(1 - u) of the standard exponential."""
    return -np.log1p(-np.asarray(u, dtype=np.float64))


def sample_exponential(n: int, stream: RngStream) -> RawSample:
    if n < 2:
        raise ValueError("n must be at least 2")
    return RawSample(exponential_from_uniform(uniform01(stream, n)))


def renyi_exponential_order_stats(n: int, stream: RngStream) -> OrderedSample:
    """Sorted standard exponentials as S_i = sum_{j<=i} E_{n-j+1} / (n-j+1).

    Draw j of the stream plays E_{n-j+1}, so S_1 = first draw / n.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    e = exponential_from_uniform(uniform01(stream, n))
    return OrderedSample(np.cumsum(e / np.arange(n, 0, -1, dtype=np.float64)))


def renyi_upper(n: int, k: int, stream: RngStream) -> float:
    """E_{n-k:n} via the same construction, without materialising the full vector."""
    e = exponential_from_uniform(uniform01(stream, n - k))
    return float(np.sum(e / np.arange(n, k, -1, dtype=np.float64)))


def sample_floor_log(n: int, stream: RngStream) -> RawSample:
    """Draws e^m with m = ceil(-log u), so P(X > e^m) = e^-m."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return RawSample(np.exp(floor_log_exponent(uniform01(stream, n))))


def floor_log_exponent(u):
    return np.ceil(-np.log(u))
