"""Finite-grid diagnostics for the index of a function in the class M.

A function U is in M with index eta when U(x)/x^(eta+eps) -> 0 and
U(x)/x^(eta-eps) -> infinity for every eps > 0, equivalently when
log U(x) / log x -> eta. A finite grid can never certify a limit: everything
here reports trend evidence over the upper half of the grid, not membership.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class MFunction:
    """U given either directly or through log U (for values that overflow)."""

    label: str
    func: Callable[[float], float] | None = None
    log_func: Callable[[float], float] | None = None

    def __post_init__(self):
        if (self.func is None) == (self.log_func is None):
            raise ValueError("give exactly one of func or log_func")

    def log_value(self, x: float) -> float:
        if self.log_func is not None:
            return float(self.log_func(x))
        u = float(self.func(x))
        if not u > 0:
            raise DomainError(f"{self.label}: U({x!r}) = {u!r} is not positive")
        return math.log(u)


def default_grid(lo: float = 10.0, hi: float = 1e12, points: int = 48) -> np.ndarray:
    return np.geomspace(lo, hi, points)


def log_log_ratio(f: MFunction, x: float) -> float:
    """log U(x) / log x for x > 1."""
    if not x > 1:
        raise DomainError(f"x must exceed 1, got {x!r}")
    return f.log_value(x) / math.log(x)


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=np.float64)
    if g.size < 8:
        raise DomainError(f"grid needs at least 8 points, got {g.size}")
    if not g[0] > 1:
        raise DomainError(f"grid must start above 1, got {g[0]!r}")
    if np.any(np.diff(g) <= 0):
        raise DomainError("grid must be strictly increasing")
    return g


@dataclass(frozen=True, eq=False)
class MIndexDiagnostic:
    grid: np.ndarray
    ratios: np.ndarray
    estimated_index: float
    max_deviation_tail: float
    drifting: bool
    extrapolated_index: float

    @property
    def tail_slice(self) -> slice:
        return slice(self.grid.size // 2, None)


def estimate_m_index(f: MFunction, grid=None) -> MIndexDiagnostic:
    """Evaluate log U / log x on the grid.

    ``estimated_index`` is the ratio at the last grid point. ``extrapolated_index``
    is the intercept of a least-squares line of ratio against 1/log x over the
    top half, which removes the a/log x bias of U = a x^eta exactly.
    ``drifting`` is set when the top-half ratios move monotonically with
    non-shrinking steps, the signature of a ratio that has no finite limit.
    """
    g = _check_grid(default_grid() if grid is None else grid)
    ratios = np.array([log_log_ratio(f, float(x)) for x in g])
    if not np.all(np.isfinite(ratios)):
        raise DomainError(f"{f.label}: non-finite log-ratio on the grid")
    top = ratios[g.size // 2:]
    estimate = float(ratios[-1])
    deviation = float(np.max(np.abs(top - estimate)))
    steps = np.diff(top)
    monotone = bool(np.all(steps > 0) or np.all(steps < 0))
    drifting = monotone and abs(steps[-1]) >= abs(steps[0])
    inv_log = 1.0 / np.log(g[g.size // 2:])
    slope, intercept = np.polyfit(inv_log, top, 1)
    return MIndexDiagnostic(g, ratios, estimate, deviation, drifting, float(intercept))


@dataclass(frozen=True)
class SandwichReport:
    eta: float
    epsilon: float
    upper_slope: float
    lower_slope: float
    upper_monotone: bool
    lower_monotone: bool

    @property
    def upper_to_zero(self) -> bool:
        """U / x^(eta+eps) trends toward 0 on the top half."""
        return self.upper_slope < 0

    @property
    def lower_to_infinity(self) -> bool:
        """U / x^(eta-eps) trends toward infinity on the top half."""
        return self.lower_slope > 0

    @property
    def consistent(self) -> bool:
        return self.upper_to_zero and self.lower_to_infinity


def check_sandwich(f: MFunction, eta: float, epsilon: float, grid=None) -> SandwichReport:
    """Trend of log(U / x^(eta +- eps)) against log x over the top half of the grid.

    The slopes are least-squares fits, which tolerates bounded oscillation such
    as a (2 + sin x) factor; the monotone flags record strict pointwise
    monotonicity separately.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    g = _check_grid(default_grid() if grid is None else grid)
    top = g[g.size // 2:]
    logx = np.log(top)
    logu = np.array([f.log_value(float(x)) for x in top])
    upper = logu - (eta + epsilon) * logx
    lower = logu - (eta - epsilon) * logx
    up_slope = float(np.polyfit(logx, upper, 1)[0])
    lo_slope = float(np.polyfit(logx, lower, 1)[0])
    return SandwichReport(
        eta,
        epsilon,
        up_slope,
        lo_slope,
        bool(np.all(np.diff(upper) < 0)),
        bool(np.all(np.diff(lower) > 0)),
    )


# log(exp(m)) can land one ulp below m; snap so grid points e^m sit on their step
_FLOOR_SNAP = 1e-9


def floor_log_log(x: float) -> float:
    """log of exp(-floor(log x)), which is in M with index -1 but not regularly varying."""
    return -float(math.floor(math.log(x) + _FLOOR_SNAP))


def floor_log_grid(m_lo: int = 1, m_hi: int = 40) -> np.ndarray:
    return np.exp(np.arange(m_lo, m_hi + 1, dtype=np.float64))


def builtin(name: str, eta: float = 1.0, scale: float = 1.0) -> MFunction:
    """Named test functions for the CLI."""
    if name == "power":
        return MFunction(f"{scale:g}*x^{eta:g}", log_func=lambda x: math.log(scale) + eta * math.log(x))
    if name == "floor-log":
        return MFunction("exp(-floor(log x))", log_func=floor_log_log)
    if name == "power-log":
        return MFunction(f"x^{eta:g}*log x", log_func=lambda x: eta * math.log(x) + math.log(math.log(x)))
    if name == "oscillating":
        return MFunction(
            f"x^{eta:g}*(2+sin x)", log_func=lambda x: eta * math.log(x) + math.log(2.0 + math.sin(x))
        )
    if name == "exp":
        return MFunction("exp(x)", log_func=lambda x: x)
    raise ValueError(f"unknown builtin function {name!r}")


BUILTINS = ("power", "floor-log", "power-log", "oscillating", "exp")
