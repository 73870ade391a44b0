"""Loading and validation of daily closing-price CSV files.

Input contract: UTF-8 CSV with header ``date,close``, one row per
trading day, ISO-8601 dates.  Extra columns (open/high/low/volume) are
ignored; only the close column is modeled.  Rows with an unparsable
date or a non-positive / non-numeric close are dropped and reported
rather than aborting, so long historical files with sparse corruption
remain usable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import date

from .errors import DuplicateDate, EmptySeries, MalformedInput


@dataclass(frozen=True)
class TimeSeries:
    """A dated, ordered sequence of closing prices.

    Invariants: dates strictly increasing, values finite and positive,
    length >= 2.
    """

    symbol: str
    dates: tuple[date, ...]
    values: tuple[float, ...]

    def __len__(self):
        return len(self.values)


@dataclass
class ValidationReport:
    row_count: int = 0
    dropped_rows: int = 0
    issues: list[tuple[int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


def _parse_close(raw: str) -> float | None:
    try:
        v = float(raw)
    except (TypeError, ValueError):
        return None
    if not math.isfinite(v) or v <= 0.0:
        return None
    return v


def load_series(path, symbol: str) -> tuple[TimeSeries, ValidationReport]:
    """Parse a close-price CSV into a canonical, date-sorted TimeSeries.

    Returns the series plus a report of dropped rows.  Raises
    FileNotFoundError, MalformedInput (bad header), EmptySeries (< 2
    valid rows) or DuplicateDate.
    """
    report = ValidationReport()
    rows: list[tuple[date, float]] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise MalformedInput(f"{path}: empty file, expected 'date,close' header")
        header = [h.strip().lower() for h in header]
        if len(header) < 2 or header[0] != "date" or "close" not in header:
            raise MalformedInput(f"{path}: header must contain 'date' and 'close'")
        close_col = header.index("close")
        for i, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            report.row_count += 1
            try:
                d = date.fromisoformat(row[0].strip())
            except (ValueError, IndexError):
                report.dropped_rows += 1
                report.issues.append((i, "unparsable date"))
                continue
            v = _parse_close(row[close_col].strip()) if len(row) > close_col else None
            if v is None:
                report.dropped_rows += 1
                report.issues.append((i, "non-positive or non-numeric close"))
                continue
            rows.append((d, v))

    if len(rows) < 2:
        raise EmptySeries(f"{path}: {len(rows)} valid rows, need at least 2")
    rows.sort(key=lambda r: r[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise DuplicateDate(f"{path}: duplicate date {d1.isoformat()}")
    ts = TimeSeries(
        symbol=symbol,
        dates=tuple(d for d, _ in rows),
        values=tuple(v for _, v in rows),
    )
    return ts, report


def validate_series(ts: TimeSeries) -> ValidationReport:
    """Check the TimeSeries invariants; reports issues, never raises."""
    report = ValidationReport(row_count=len(ts.values))
    if len(ts.values) < 2:
        report.issues.append((0, "series shorter than 2 points"))
    if len(ts.dates) != len(ts.values):
        report.issues.append((0, "dates/values length mismatch"))
        return report
    for i, (d1, d2) in enumerate(zip(ts.dates, ts.dates[1:]), start=1):
        if d1 == d2:
            report.issues.append((i, f"duplicate date {d1.isoformat()}"))
        elif d1 > d2:
            report.issues.append((i, f"dates out of order at {d2.isoformat()}"))
    for i, v in enumerate(ts.values):
        if not math.isfinite(v):
            report.issues.append((i, "non-finite price"))
        elif v <= 0.0:
            report.issues.append((i, "non-positive price"))
    return report


def write_series(ts: TimeSeries, path):
    """Emit the canonical CSV form (loading it back reproduces `ts`)."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["date", "close"])
        for d, v in zip(ts.dates, ts.values):
            writer.writerow([d.isoformat(), repr(v)])
