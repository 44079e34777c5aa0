"""Estimate the tail index of an insurance-loss CSV, full sample and above a threshold.

Usage: python scripts/danish_workflow.py losses.csv --column loss --threshold 1.0
Writes series for the single-order-statistic (C=1), reciprocal Hill and
reciprocal moment estimators and prints their values at a few k.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from tailix.cli import DEFAULT_ESTIMATE_TAGS
from tailix.cli import main as cli_main
from tailix.dataio import read_series_csv


def run(data: Path, column: str, threshold: float | None, out: Path) -> None:
    argv = ["estimate", str(data), "--column", column, "--out-dir", str(out)]
    if threshold is not None:
        argv += ["--threshold", str(threshold)]
    if cli_main(argv):
        raise SystemExit(1)
    for tag in DEFAULT_ESTIMATE_TAGS:
        s = read_series_csv(out / f"{data.stem}_{tag}.csv")
        picks = [k for k in (50, 100, 250, 500, 1000) if k in set(s.ks.tolist())]
        cells = ", ".join(f"k={k}: {s.at(k):.3f}" if s.at(k) is not None else f"k={k}: -" for k in picks)
        print(f"  {tag:>14}  {cells}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("data", type=Path)
    ap.add_argument("--column", default="0")
    ap.add_argument("--threshold", type=float, default=1.0)
    ap.add_argument("--out-dir", type=Path, default=Path("out/losses"))
    args = ap.parse_args()
    print("full sample")
    run(args.data, args.column, None, args.out_dir / "full")
    print(f"values >= {args.threshold:g}")
    run(args.data, args.column, args.threshold, args.out_dir / "above")


if __name__ == "__main__":
    main()
