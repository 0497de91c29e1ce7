"""CSV ingestion/emission and currency conversion of dated price series."""

from __future__ import annotations

import csv
import datetime as dt
import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .series import TimeSeries

__all__ = ["sample_prices_path", "ingest_csv", "series_to_csv", "write_series_csv", "convert_currency", "JoinReport"]

log = logging.getLogger(__name__)


def sample_prices_path() -> Path:
    """Bundled synthetic daily price file (fGn returns, H = 0.55, 4097 prices)."""
    return Path(__file__).with_name("data") / "sample_prices.csv"


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}") from None
    except UnicodeDecodeError as e:
        raise DataError(f"{path}: not valid UTF-8 ({e.reason})") from None


def ingest_csv(path, date_column: str = "date", price_column: str = "price",
               positive: bool = True) -> TimeSeries:
    """Read a headed UTF-8 CSV into a dated TimeSeries, keeping file order.

    Dates must be ISO-8601 calendar dates and strictly increasing. Row
    numbers in errors are 1-based file lines, the header being row 1.
    """
    reader = csv.reader(io.StringIO(_read_text(path)))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataError(f"{path}: empty file") from None
    for col in (date_column, price_column):
        if col not in header:
            raise DataError(f"{path}: column {col!r} not found in header {header}", column=col)
    di, pi = header.index(date_column), header.index(price_column)
    dates, values = [], []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) <= max(di, pi):
            raise DataError(f"{path}: row {row_no} has {len(row)} fields", row=row_no)
        try:
            d = dt.date.fromisoformat(row[di].strip())
        except ValueError:
            raise DataError(f"{path}: row {row_no}, column {date_column!r}: "
                            f"unparseable date {row[di]!r}", row=row_no, column=date_column) from None
        try:
            v = float(row[pi])
        except ValueError:
            raise DataError(f"{path}: row {row_no}, column {price_column!r}: "
                            f"unparseable number {row[pi]!r}", row=row_no, column=price_column) from None
        if not np.isfinite(v) or (positive and v <= 0):
            what = "a positive finite price" if positive else "finite"
            raise DataError(f"{path}: row {row_no}, column {price_column!r}: value {v!r} is not {what}",
                            row=row_no, column=price_column)
        if dates and d <= dates[-1]:
            raise DataError(f"{path}: row {row_no}: date {d} does not follow {dates[-1]} "
                            "(dates must be strictly increasing)", row=row_no, column=date_column)
        dates.append(d)
        values.append(v)
    if not values:
        raise DataError(f"{path}: no data rows")
    return TimeSeries(np.array(values), np.array(dates, dtype="datetime64[D]"), Path(path).name)


def series_to_csv(ts: TimeSeries, date_column: str = "date", value_column: str = "price") -> str:
    """CSV text for a series; floats use repr so re-ingestion is bit-identical."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if ts.dates is not None:
        w.writerow([date_column, value_column])
        for d, v in zip(ts.dates, ts.values):
            w.writerow([str(d), repr(float(v))])
    else:
        w.writerow(["index", value_column])
        for i, v in enumerate(ts.values):
            w.writerow([i, repr(float(v))])
    return buf.getvalue()


def write_series_csv(ts: TimeSeries, path, date_column: str = "date", value_column: str = "price") -> None:
    Path(path).write_text(series_to_csv(ts, date_column, value_column), encoding="utf-8")


@dataclass(frozen=True)
class JoinReport:
    matched: int
    dropped_prices: int
    dropped_rates: int


def convert_currency(prices: TimeSeries, rates: TimeSeries, report: bool = False):
    """Price times same-day rate on the inner join of the two date sets.

    Unmatched days are dropped. With ``report=True`` returns
    ``(series, JoinReport)``.
    """
    if prices.dates is None or rates.dates is None:
        raise DataError("currency conversion needs dated series")
    if np.any(rates.values <= 0):
        i = int(np.flatnonzero(rates.values <= 0)[0])
        raise DataError(f"non-positive exchange rate at index {i}", index=i)
    common, pi, ri = np.intersect1d(prices.dates, rates.dates, assume_unique=True, return_indices=True)
    if common.size == 0:
        raise DataError("currency conversion: price and rate series share no dates")
    jr = JoinReport(int(common.size), len(prices) - common.size, len(rates) - common.size)
    if jr.dropped_prices or jr.dropped_rates:
        log.info("currency join dropped %d price days and %d rate days", jr.dropped_prices, jr.dropped_rates)
    out = TimeSeries(prices.values[pi] * rates.values[ri], common, f"{prices.label}*{rates.label}")
    return (out, jr) if report else out
