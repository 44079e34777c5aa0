"""Monte Carlo engine for the consistency, normality and simulation-study runs.

Every replication r draws from its own stream ``RngStream(cell_seed, r)`` and
results are collected in replication order, so a run is bit-identical for any
number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from . import estimators as est
from .errors import DegenerateDenominator, TooManyDegenerate
from .sample import check_k, sort_sample
from .sampling import (
    HallTailModel,
    ParetoModel,
    RngStream,
    derive_seed,
    renyi_exponential_order_stats,
    sample_floor_log,
    sample_hall,
    sample_pareto,
)
from .stats import ks_critical, ks_distance

# labels folded into base_seed so experiment families never share streams
_LEMMA2, _LEMMA3, _CONSISTENCY, _NORMALITY, _GRID = 2, 3, 10, 40, 31

MIN_REPLICATIONS = 100
MAX_DEGENERATE_FRACTION = 0.01


def run_replications(task: Callable[[int], object], R: int, workers: int = 1) -> list:
    """Evaluate task(r) for r = 0..R-1 and return results in r order."""
    if R < 1:
        raise ValueError("need at least one replication")
    if workers <= 1 or R == 1:
        return [task(r) for r in range(R)]
    chunk = max(1, R // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(R), chunksize=chunk))


# ---------------------------------------------------------------- k rules


@dataclass(frozen=True)
class KRule:
    """How k is chosen for a sample of size n.

    kind: "default" (every k to 100, then geometric), "full" (every k),
    "fractions" (k = floor(f n) per fraction), "power" (k = floor(n^delta))
    or "explicit" (the listed ks, for every n).
    """

    kind: str = "default"
    fractions: tuple[float, ...] = ()
    delta: float | None = None
    ks: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("default", "full", "fractions", "power", "explicit"):
            raise ValueError(f"unknown k rule {self.kind!r}")
        if self.kind == "power" and not (self.delta is not None and 0 < self.delta < 1):
            raise ValueError("power rule needs 0 < delta < 1")
        if self.kind == "fractions" and not self.fractions:
            raise ValueError("fractions rule needs at least one fraction")
        if self.kind == "explicit" and not self.ks:
            raise ValueError("explicit rule needs at least one k")

    def grid(self, n: int, C: float | None = None) -> list[int]:
        if self.kind == "default":
            return est.default_k_grid(n, C)
        if self.kind == "full":
            return list(range(1, n))
        if self.kind == "power":
            return [power_k(n, self.delta)]
        if self.kind == "explicit":
            return sorted(set(self.ks))
        ks = sorted({min(max(1, int(math.floor(f * n))), n - 1) for f in self.fractions})
        return ks


def power_k(n: int, delta: float) -> int:
    """floor(n^delta), guarded against n^delta landing a hair below an integer."""
    k = int(math.floor(n ** delta * (1.0 + 1e-12)))
    return min(max(k, 1), n - 1)


@dataclass(frozen=True)
class GridSpec:
    alphas: tuple[float, ...] = (0.1, 1.0, 1.5)
    Cs: tuple[float, ...] = (0.1, 1.0, 10.0)
    ns: tuple[int, ...] = (1_000, 10_000, 100_000)
    k_rule: KRule = field(default_factory=KRule)
    replications: int = 1
    base_seed: int = 0

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")

    def cells(self) -> list[tuple[float, float, int]]:
        """(alpha, C, n) cells in a fixed order; the list index is the cell id."""
        return [(a, C, n) for C in self.Cs for n in self.ns for a in self.alphas]


# ---------------------------------------------------------------- results


@dataclass
class NormalityResult:
    t_samples: np.ndarray
    mean: float
    variance: float
    ks_distance_vs_normal: float
    target_sd: float
    params: dict
    degenerate: int = 0

    @classmethod
    def from_samples(cls, t, target_sd: float, params: dict, degenerate: int = 0) -> "NormalityResult":
        t = np.asarray(t, dtype=np.float64)
        var = float(np.var(t, ddof=1)) if t.size > 1 else 0.0
        return cls(t, float(np.mean(t)), var, ks_distance(t, 0.0, target_sd), target_sd, params, degenerate)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["t_samples"] = self.t_samples.tolist()
        return d


@dataclass
class RatioSummary:
    ratios: np.ndarray
    median: float
    interval: tuple[float, float]
    params: dict

    @property
    def width(self) -> float:
        return self.interval[1] - self.interval[0]

    def to_dict(self) -> dict:
        return {"ratios": self.ratios.tolist(), "median": self.median,
                "interval": list(self.interval), "params": self.params}


@dataclass
class ConsistencyCurve:
    ns: list[int]
    ks: list[int]
    errors: list[float]
    degenerate: list[int]
    k_rule: KRule
    params: dict

    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))

    def to_dict(self) -> dict:
        return {"ns": self.ns, "ks": self.ks, "errors": self.errors, "degenerate": self.degenerate,
                "k_rule": asdict(self.k_rule), "params": self.params}


# ---------------------------------------------------------------- lemmas


def _lemma2_rep(r: int, n: int, k: int, seed: int) -> float:
    s = renyi_exponential_order_stats(n, RngStream(seed, r))
    return math.sqrt(k) * (float(s.sorted[n - k - 1]) - math.log(n / k))


def lemma2_experiment(n: int, k: int, R: int, base_seed: int = 0, workers: int = 1) -> NormalityResult:
    """Z = sqrt(k) (E_{n-k:n} - log(n/k)) over R replications, compared with N(0, 1)."""
    check_k(n, k)
    seed = derive_seed(base_seed, _LEMMA2)
    z = run_replications(partial(_lemma2_rep, n=n, k=k, seed=seed), R, workers)
    return NormalityResult.from_samples(z, 1.0, {"n": n, "k": k, "R": R, "base_seed": base_seed})


def _lemma3_rep(r: int, n: int, k: int, seed: int) -> float:
    s = renyi_exponential_order_stats(n, RngStream(seed, r))
    return float(s.sorted[n - k - 1]) / math.log(n / k)


def lemma3_ratio_experiment(n: int, k: int, R: int, base_seed: int = 0, workers: int = 1) -> RatioSummary:
    """E_{n-k:n} / log(n/k): median and central 90% interval over R replications."""
    seed = derive_seed(base_seed, _LEMMA3)
    ratios = np.asarray(run_replications(partial(_lemma3_rep, n=n, k=k, seed=seed), R, workers))
    lo, hi = np.quantile(ratios, [0.05, 0.95])
    return RatioSummary(ratios, float(np.median(ratios)), (float(lo), float(hi)),
                        {"n": n, "k": k, "R": R, "base_seed": base_seed})


# ---------------------------------------------------------------- consistency


@dataclass(frozen=True)
class FloorLogModel:
    """Tail exp(-floor(log x)); index 1 in M, not regularly varying."""

    alpha: float = 1.0
    C: float = 1.0


def draw(model, n: int, stream: RngStream):
    if isinstance(model, FloorLogModel):
        return sample_floor_log(n, stream)
    if isinstance(model, HallTailModel):
        return sample_hall(n, model, stream)
    return sample_pareto(n, model, stream)


def _consistency_rep(r: int, model, n: int, k: int, seed: int) -> float:
    os = sort_sample(draw(model, n, RngStream(seed, r)))
    try:
        a_hat = est.cadena_scaled(os, k, model.C)
    except DegenerateDenominator:
        return math.nan
    if a_hat == 0.0:
        return math.nan
    return abs(1.0 / a_hat - 1.0 / model.alpha)


def consistency_experiment(model, spec: GridSpec, workers: int = 1) -> ConsistencyCurve:
    """Median |1/alpha_hat - 1/alpha| per n, with alpha_hat the C-scaled estimator.

    Each n in spec.ns must map to a single k (power or single-fraction rule).
    Degenerate replications are excluded and counted.
    """
    ns = sorted(spec.ns)
    if len(set(ns)) != len(ns):
        raise ValueError("ns must be distinct")
    ks, errors, degenerate = [], [], []
    for idx, n in enumerate(ns):
        grid = spec.k_rule.grid(n, model.C)
        if len(grid) != 1:
            raise ValueError("consistency runs need a k rule giving one k per n")
        k = grid[0]
        seed = derive_seed(spec.base_seed, _CONSISTENCY, n)
        errs = np.asarray(run_replications(
            partial(_consistency_rep, model=model, n=n, k=k, seed=seed), spec.replications, workers))
        bad = int(np.isnan(errs).sum())
        ks.append(k)
        degenerate.append(bad)
        errors.append(float(np.median(errs[~np.isnan(errs)])) if bad < errs.size else math.nan)
    params = {"model": type(model).__name__, **asdict(model), "replications": spec.replications,
              "base_seed": spec.base_seed}
    return ConsistencyCurve(ns, ks, errors, degenerate, spec.k_rule, params)


# ---------------------------------------------------------------- normality


def _normality_rep(r: int, model: HallTailModel, n: int, k: int, seed: int, statistic: str) -> float:
    os = sort_sample(sample_hall(n, model, RngStream(seed, r)))
    try:
        a_hat = est.cadena_scaled(os, k, model.C)
    except DegenerateDenominator:
        return math.nan
    level = math.sqrt(k) * (math.log(n / k) + math.log(model.C))
    if statistic == "direct":
        return level * (a_hat - model.alpha)
    if a_hat == 0.0:
        return math.nan
    return level * (1.0 / a_hat - 1.0 / model.alpha)


def normality_experiment(model: HallTailModel, n: int, k: int, R: int, base_seed: int = 0,
                         workers: int = 1, statistic: str = "inverse") -> NormalityResult:
    """Standardised estimator error over R replications, compared with N(0, alpha^2).

    statistic="inverse": T = sqrt(k) (log(n/k) + log C) (1/alpha_hat - 1/alpha).
    statistic="direct":  sqrt(k) (log(n/k) + log C) (alpha_hat - alpha).

    The inverse-scale statistic has limiting standard deviation 1/alpha (the
    Renyi expansion of log X_{n-k:n} gives variance alpha^-2 / k); the
    direct-scale one has alpha. Both are compared with N(0, alpha^2) here and
    agree at alpha = 1.
    """
    if statistic not in ("inverse", "direct"):
        raise ValueError(f"unknown statistic {statistic!r}")
    check_k(n, k)
    seed = derive_seed(base_seed, _NORMALITY)
    t = np.asarray(run_replications(
        partial(_normality_rep, model=model, n=n, k=k, seed=seed, statistic=statistic), R, workers))
    bad = np.isnan(t)
    degenerate = int(bad.sum())
    if degenerate > MAX_DEGENERATE_FRACTION * R:
        raise TooManyDegenerate(f"{degenerate} of {R} replications were degenerate")
    params = {"alpha": model.alpha, "C": model.C, "beta": model.beta, "coefficient": model.coefficient,
              "margin": model.margin, "n": n, "k": k, "R": R, "base_seed": base_seed,
              "statistic": statistic}
    return NormalityResult.from_samples(t[~bad], model.alpha, params, degenerate)


# ---------------------------------------------------------------- bounds


@dataclass
class Check:
    name: str
    value: float
    bound: str
    passed: bool
    derivation: str


@dataclass
class SuiteOutcome:
    status: str  # "pass", "fail" or "inconclusive"
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {"status": self.status, "checks": [asdict(c) for c in self.checks]}


def normal_suite(result: NormalityResult, min_replications: int = MIN_REPLICATIONS,
                 ks_slack: float = 0.01) -> SuiteOutcome:
    """Monte Carlo bounds for mean, variance and KS distance at the result's R."""
    m = result.t_samples.size
    sd = result.target_sd
    mean_tol = 3.0 * sd / math.sqrt(m)
    var_rel = 4.5 * math.sqrt(2.0 / m)
    ks_tol = ks_critical(m, 0.01) + ks_slack
    checks = [
        Check("mean", result.mean, f"|mean| <= {mean_tol:.4g}", abs(result.mean) <= mean_tol,
              f"3 sd / sqrt(R) with sd={sd:g}, R={m}"),
        Check("variance", result.variance, f"in [{sd * sd * (1 - var_rel):.4g}, {sd * sd * (1 + var_rel):.4g}]",
              abs(result.variance / (sd * sd) - 1.0) <= var_rel,
              "sd^2 (1 +- 4.5 sqrt(2/R)), sample-variance standard error sd^2 sqrt(2/R)"),
        Check("ks", result.ks_distance_vs_normal, f"<= {ks_tol:.4g}", result.ks_distance_vs_normal <= ks_tol,
              f"1% asymptotic KS critical 1.628/sqrt(R) plus {ks_slack:g} finite-n slack"),
    ]
    if m < min_replications:
        return SuiteOutcome("inconclusive", checks)
    return SuiteOutcome("pass" if all(c.passed for c in checks) else "fail", checks)


def consistency_suite(curve: ConsistencyCurve, final_tol: float | None = None) -> SuiteOutcome:
    errs = curve.errors
    checks = [Check("decreasing", float(curve.decreasing()), "medians strictly decreasing in n",
                    curve.decreasing(), "consistency: 1/alpha_hat -> 1/alpha as n grows")]
    if final_tol is not None:
        checks.append(Check("final", errs[-1], f"<= {final_tol:g}", errs[-1] <= final_tol,
                            "scale alpha / (sqrt(k) log(n/k)) at the largest n, with slack"))
    return SuiteOutcome("pass" if all(c.passed for c in checks) else "fail", checks)


# ---------------------------------------------------------------- simulation grid

SIMULATION_TAGS = ("cadena-scaled", "hill", "hill-recip", "moment", "moment-recip")


@dataclass(frozen=True, eq=False)
class CellResult:
    cell_id: int
    alpha: float
    C: float
    n: int
    series: dict

    @property
    def reference(self) -> float:
        return self.alpha


def _cell_estimators(C: float) -> list[est.EstimatorSpec]:
    return [est.EstimatorSpec("cadena-scaled", {"C": C})] + [est.EstimatorSpec(t) for t in SIMULATION_TAGS[1:]]


def _simulate_cell(cell_id: int, cells, k_rule: KRule, seed: int) -> CellResult:
    alpha, C, n = cells[cell_id]
    os = sort_sample(sample_pareto(n, ParetoModel(alpha, C), RngStream(seed, cell_id)))
    grid = k_rule.grid(n, C)
    series = {spec.tag: est.estimate_series(os, spec, grid) for spec in _cell_estimators(C)}
    return CellResult(cell_id, alpha, C, n, series)


def simulation_grid(spec: GridSpec, workers: int = 1) -> list[CellResult]:
    """One seeded Pareto sample per (alpha, C, n) cell and five estimate series on it."""
    cells = spec.cells()
    seed = derive_seed(spec.base_seed, _GRID)
    return run_replications(partial(_simulate_cell, cells=cells, k_rule=spec.k_rule, seed=seed),
                            len(cells), workers)
