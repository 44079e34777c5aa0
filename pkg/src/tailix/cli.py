"""Command-line entry point.

Exit codes: 0 pass, 1 usage or parse error, 2 suite failure (or inconclusive),
3 degenerate data.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from . import estimators as est
from . import experiments as exp
from . import mindex
from .dataio import (
    DatasetSpec,
    RunManifest,
    read_dataset,
    read_tabulated,
    write_json,
    write_manifest,
    write_series_csv,
)
from .errors import DegenerateDenominator, DegenerateMoments, TailixError, TooManyDegenerate
from .sample import check_k, sort_sample
from .sampling import HallTailModel, ParetoModel

EXIT_OK, EXIT_USAGE, EXIT_SUITE, EXIT_DEGENERATE = 0, 1, 2, 3
SEED_ENV = "TAILIX_SEED"

log = logging.getLogger("tailix")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(value) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None


def parse_k_grid(text: str, n: int, C: float | None = None) -> list[int]:
    """'default', 'a:b', 'a:b:step' (inclusive) or a comma list."""
    text = text.strip()
    if text == "default":
        return est.default_k_grid(n, C)
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            return list(range(lo, hi + 1, step))
        return sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError:
        raise UsageError(f"cannot parse k-grid {text!r}") from None


def _fmt(x: float) -> str:
    return f"{x:g}"


def _finish(args, command: str, out_dir: Path, outputs: list[Path], seed: int | None) -> None:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
    manifest = RunManifest(command, params, seed, outputs=[p.name for p in outputs])
    write_manifest(out_dir / "manifest.json", manifest)


# ---------------------------------------------------------------- commands


def _estimator_spec(tag: str, args) -> est.EstimatorSpec:
    if tag == "cadena-scaled":
        return est.EstimatorSpec(tag, {"C": args.C})
    if tag == "shift":
        return est.EstimatorSpec(tag, {"C1": args.C1, "C2": args.C2})
    if tag == "average":
        return est.EstimatorSpec(tag, {"width": args.width})
    return est.EstimatorSpec(tag)


def cmd_estimate(args) -> int:
    spec = DatasetSpec(args.data, _column(args.column), args.delimiter, args.header, args.threshold)
    ingested = read_dataset(spec)
    os_ = sort_sample(ingested.sample)
    n = os_.n
    if args.k is not None:
        grid = [args.k]
    else:
        grid = parse_k_grid(args.k_grid, n, args.C)
    for k in (grid[0], grid[-1]):
        check_k(n, k)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.data).stem
    outputs = []
    for tag in args.estimator or DEFAULT_ESTIMATE_TAGS:
        series = est.estimate_series(os_, _estimator_spec(tag, args), grid)
        outputs.append(write_series_csv(out_dir / f"{stem}_{tag}.csv", series))
    args.rows_read, args.rows_kept = ingested.rows_read, ingested.rows_kept
    _finish(args, "estimate", out_dir, outputs, None)
    print(f"n={n} (rows read {ingested.rows_read}); wrote {len(outputs)} series to {out_dir}")
    return EXIT_OK


DEFAULT_ESTIMATE_TAGS = ("cadena-scaled", "hill-recip", "moment-recip")


def _column(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def cmd_simulate(args) -> int:
    seed = _seed(args.seed)
    if args.k_grid == "default":
        rule = exp.KRule("default")
    else:
        rule = exp.KRule("explicit", ks=tuple(parse_k_grid(args.k_grid, 0)))
    spec = exp.GridSpec(tuple(args.alpha), tuple(args.C), tuple(args.n), rule, 1, seed)
    cells = exp.simulation_grid(spec, workers=args.workers)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for cell in cells:
        for tag, series in cell.series.items():
            name = f"cell_a{_fmt(cell.alpha)}_C{_fmt(cell.C)}_n{cell.n}_{tag}.csv"
            outputs.append(write_series_csv(out_dir / name, series))
    args.seed = seed
    _finish(args, "simulate", out_dir, outputs, seed)
    print(f"{len(cells)} cells, {len(outputs)} series files in {out_dir}")
    return EXIT_OK


def _report(args, command: str, payload: dict, outcome: exp.SuiteOutcome, seed: int) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload["suite"] = outcome.to_dict()
    report = write_json(out_dir / f"{command}_report.json", payload)
    args.seed = seed
    _finish(args, command, out_dir, [report], seed)
    for c in outcome.checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.value:.6g} ({c.bound}; {c.derivation})")
    print(f"{command}: {outcome.status}")
    return EXIT_OK if outcome.passed else EXIT_SUITE


def cmd_normality(args) -> int:
    seed = _seed(args.seed)
    model = HallTailModel(args.alpha, args.C, args.beta, args.coefficient, args.margin)
    result = exp.normality_experiment(model, args.n, args.k, args.replications, seed,
                                      workers=args.workers, statistic=args.statistic)
    return _report(args, "normality", result.to_dict(), exp.normal_suite(result), seed)


def cmd_lemma2(args) -> int:
    seed = _seed(args.seed)
    result = exp.lemma2_experiment(args.n, args.k, args.replications, seed, workers=args.workers)
    return _report(args, "lemma2", result.to_dict(), exp.normal_suite(result), seed)


def cmd_consistency(args) -> int:
    seed = _seed(args.seed)
    model = exp.FloorLogModel() if args.model == "floor-log" else ParetoModel(args.alpha, args.C)
    spec = exp.GridSpec(ns=tuple(args.n), k_rule=exp.KRule("power", delta=args.delta),
                        replications=args.replications, base_seed=seed)
    curve = exp.consistency_experiment(model, spec, workers=args.workers)
    return _report(args, "consistency", curve.to_dict(), exp.consistency_suite(curve, args.final_tol), seed)


def cmd_mindex(args) -> int:
    if args.table:
        xs, us = read_tabulated(args.table)
        table = dict(zip(xs.tolist(), us.tolist()))
        f = mindex.MFunction(Path(args.table).name, func=table.__getitem__)
        grid = xs
    else:
        f = mindex.builtin(args.function, args.eta, args.scale)
        if args.points is None and args.function == "floor-log":
            grid = mindex.floor_log_grid()
        else:
            grid = mindex.default_grid(args.grid_lo, args.grid_hi, args.points or 48)
    diag = mindex.estimate_m_index(f, grid)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "log_ratio"])
        for x, r in zip(diag.grid, diag.ratios):
            w.writerow([repr(float(x)), repr(float(r))])
    write_json(out.with_suffix(".json"), {
        "function": f.label, "estimated_index": diag.estimated_index,
        "extrapolated_index": diag.extrapolated_index, "max_deviation_tail": diag.max_deviation_tail,
        "drifting": diag.drifting, "points": int(diag.grid.size),
    })
    print(f"{f.label}: estimated index {diag.estimated_index:.6g} "
          f"(extrapolated {diag.extrapolated_index:.6g}, tail deviation {diag.max_deviation_tail:.3g}, "
          f"drifting={diag.drifting})")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tailix", description="Tail-index estimation and Monte Carlo checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("estimate", help="estimate series on a CSV column")
    e.add_argument("data")
    e.add_argument("--column", default="0", help="index or header name (default first)")
    e.add_argument("--delimiter", default=",")
    hdr = e.add_mutually_exclusive_group()
    hdr.add_argument("--header", dest="header", action="store_true", default=None)
    hdr.add_argument("--no-header", dest="header", action="store_false")
    e.add_argument("--threshold", type=float)
    e.add_argument("--estimator", action="append", choices=sorted(est.ESTIMATORS))
    kg = e.add_mutually_exclusive_group()
    kg.add_argument("--k", type=int)
    kg.add_argument("--k-grid", default="default")
    e.add_argument("--C", type=float, default=1.0)
    e.add_argument("--C1", type=float, default=0.0)
    e.add_argument("--C2", type=float, default=0.0)
    e.add_argument("--width", type=int, default=10, help="k2 - k1 for the averaged variant")
    e.add_argument("--out-dir", default="out")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("simulate", help="estimate series on seeded Pareto samples")
    s.add_argument("--alpha", type=float, nargs="+", default=[0.1, 1.0, 1.5])
    s.add_argument("--C", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    s.add_argument("--n", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    s.add_argument("--k-grid", default="default")
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out-dir", default="out")
    s.set_defaults(func=cmd_simulate)

    nm = sub.add_parser("normality", help="sampling distribution of the standardised estimator")
    nm.add_argument("--alpha", type=float, default=1.0)
    nm.add_argument("--C", type=float, default=1.0)
    nm.add_argument("--beta", type=float, default=1.0)
    nm.add_argument("--coefficient", type=float, default=0.0, help="perturbation coefficient c")
    nm.add_argument("--margin", type=float, default=0.1)
    nm.add_argument("--n", type=int, default=100_000)
    nm.add_argument("--k", type=int, default=1000)
    nm.add_argument("--replications", type=int, default=1000)
    nm.add_argument("--statistic", choices=("inverse", "direct"), default="inverse")
    nm.add_argument("--seed", type=int)
    nm.add_argument("--workers", type=int, default=1)
    nm.add_argument("--out-dir", default="out")
    nm.set_defaults(func=cmd_normality)

    c = sub.add_parser("consistency", help="median error as n grows with k = floor(n^delta)")
    c.add_argument("--model", choices=("pareto", "floor-log"), default="pareto")
    c.add_argument("--alpha", type=float, default=1.0)
    c.add_argument("--C", type=float, default=1.0)
    c.add_argument("--n", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    c.add_argument("--delta", type=float, default=0.5)
    c.add_argument("--replications", type=int, default=50)
    c.add_argument("--final-tol", type=float)
    c.add_argument("--seed", type=int)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out-dir", default="out")
    c.set_defaults(func=cmd_consistency)

    l2 = sub.add_parser("lemma2", help="normality of exponential upper order statistics")
    l2.add_argument("--n", type=int, default=100_000)
    l2.add_argument("--k", type=int, default=316)
    l2.add_argument("--replications", type=int, default=2000)
    l2.add_argument("--seed", type=int)
    l2.add_argument("--workers", type=int, default=1)
    l2.add_argument("--out-dir", default="out")
    l2.set_defaults(func=cmd_lemma2)

    m = sub.add_parser("mindex", help="log U(x) / log x diagnostics")
    src = m.add_mutually_exclusive_group(required=True)
    src.add_argument("--function", choices=mindex.BUILTINS)
    src.add_argument("--table", help="two-column CSV of x, U(x)")
    m.add_argument("--eta", type=float, default=1.0)
    m.add_argument("--scale", type=float, default=1.0)
    m.add_argument("--grid-lo", type=float, default=10.0)
    m.add_argument("--grid-hi", type=float, default=1e12)
    m.add_argument("--points", type=int)
    m.add_argument("--out", default="out/mindex.csv")
    m.set_defaults(func=cmd_mindex)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (DegenerateDenominator, DegenerateMoments, TooManyDegenerate) as exc:
        print(f"tailix: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (TailixError, UsageError, ValueError, OSError) as exc:
        print(f"tailix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
