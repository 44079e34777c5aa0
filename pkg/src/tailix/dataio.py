"""CSV ingestion and plot-ready serialization of series, reports and manifests.

Output conventions: UTF-8, LF line endings, comma delimiter, header row, '.'
decimal separator and shortest round-trip float formatting (``repr``).
Undefined series points are written as an empty value with defined=0.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, EmptyAfterFilter, NonPositiveValue, ParseError
from .estimators import EstimateSeries
from .sample import RawSample

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetSpec:
    path: str | Path
    column: int | str = 0
    delimiter: str = ","
    header: bool | None = None  # None: header iff the first row's column is not numeric
    threshold: float | None = None

    def __post_init__(self):
        if self.threshold is not None and not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class IngestResult:
    sample: RawSample
    rows_read: int
    rows_kept: int


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_dataset(spec: DatasetSpec) -> IngestResult:
    """Read one numeric column, reject non-positive values, apply the threshold."""
    path = Path(spec.path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i, row) for i, row in enumerate(csv.reader(fh, delimiter=spec.delimiter), start=1)
                if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError(f"{path}: no data rows")

    first_line, first = rows[0]
    header = spec.header
    if header is None:
        if isinstance(spec.column, str):
            header = True
        else:
            cell = first[spec.column].strip() if spec.column < len(first) else ""
            header = not _is_number(cell)
    col = spec.column
    if header:
        names = [c.strip() for c in first]
        if isinstance(col, str):
            if col not in names:
                raise ParseError(f"column {col!r} not in header {names}", line=first_line)
            col = names.index(col)
        rows = rows[1:]
    elif isinstance(col, str):
        raise ParseError("a named column needs a header row", line=first_line)

    values = []
    for line, row in rows:
        if col >= len(row):
            raise ParseError(f"row has {len(row)} fields, column {col} missing", line=line)
        text = row[col].strip()
        try:
            value = float(text)
        except ValueError:
            raise ParseError(f"cannot parse {text!r} as a number", line=line) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite value {text!r}", line=line)
        if value <= 0:
            raise NonPositiveValue(f"line {line}: value {text!r} is not positive")
        values.append(value)

    kept = values if spec.threshold is None else [v for v in values if v >= spec.threshold]
    if len(kept) < 2:
        raise EmptyAfterFilter(f"{len(kept)} values left after filtering {len(values)} rows (need 2)")
    log.info("read %d rows from %s, kept %d", len(values), path, len(kept))
    return IngestResult(RawSample(np.asarray(kept)), len(values), len(kept))


def ingest_csv(spec: DatasetSpec) -> RawSample:
    return read_dataset(spec).sample


def format_float(value: float) -> str:
    return repr(float(value))


def write_series_csv(path: str | Path, series: EstimateSeries) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "estimator_tag", "value", "defined"])
        for k, v in series.points():
            writer.writerow([k, series.estimator_tag, "" if v is None else format_float(v), 0 if v is None else 1])
    return path


def read_series_csv(path: str | Path) -> EstimateSeries:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    tag = rows[0]["estimator_tag"] if rows else ""
    ks = np.array([int(r["k"]) for r in rows], dtype=np.int64)
    vals = np.array([float(r["value"]) if r["defined"] == "1" else np.nan for r in rows])
    return EstimateSeries(tag, {}, ks, vals)


@dataclass
class RunManifest:
    command: str
    parameters: dict
    base_seed: int | None
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    python: str = field(default_factory=platform.python_version)
    outputs: list[str] = field(default_factory=list)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")
    return path


def write_manifest(path: str | Path, manifest: RunManifest) -> Path:
    return write_json(path, asdict(manifest))


def read_tabulated(path: str | Path, delimiter: str = ",") -> tuple[np.ndarray, np.ndarray]:
    """Two-column (x, U(x)) table; a header row is skipped when not numeric."""
    xs, us = [], []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for line, row in enumerate(csv.reader(fh, delimiter=delimiter), start=1):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) < 2:
                raise ParseError("expected two columns x, U(x)", line=line)
            a, b = row[0].strip(), row[1].strip()
            if line == 1 and not (_is_number(a) and _is_number(b)):
                continue
            try:
                x, u = float(a), float(b)
            except ValueError:
                raise ParseError(f"cannot parse {row[:2]!r}", line=line) from None
            if not x > 1:
                raise DomainError(f"line {line}: x = {a} must exceed 1")
            if not u > 0:
                raise DomainError(f"line {line}: U(x) = {b} must be positive")
            xs.append(x)
            us.append(u)
    if len(xs) < 8:
        raise DomainError(f"table needs at least 8 rows, got {len(xs)}")
    order = np.argsort(xs)
    return np.asarray(xs)[order], np.asarray(us)[order]
