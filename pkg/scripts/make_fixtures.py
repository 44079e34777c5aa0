"""Regenerate the bundled CSV fixtures under tests/data.

synthetic_pareto.csv: 2000 seeded Pareto(alpha=1.45, C=1) losses with a date
column, shaped like an insurance-loss file.
pareto_grid.csv: the exact quantile grid (n/j)^(1/alpha), n=1000, alpha=1.5.
"""
from __future__ import annotations

import argparse
import csv
from pathlib import Path

from tailix.sample import pareto_quantile_grid
from tailix.sampling import ParetoModel, RngStream, sample_pareto

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=DATA)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    values = sample_pareto(2000, ParetoModel(1.45, 1.0), RngStream(1945, 0)).values
    with (args.out / "synthetic_pareto.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "loss"])
        for i, v in enumerate(values):
            w.writerow([f"day{i:04d}", repr(float(v))])

    grid = pareto_quantile_grid(1000, 1.5).sorted
    with (args.out / "pareto_grid.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for v in grid:
            w.writerow([repr(float(v))])
    print(f"wrote fixtures to {args.out}")


if __name__ == "__main__":
    main()
