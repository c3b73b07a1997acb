"""Daily close-price ingestion and log-return construction.

Raw CSVs arrive with arbitrary gaps (exchanges that close on weekends,
scrape dropouts).  The pipeline here normalizes everything onto a
seven-day calendar: parse -> align to a common window -> fill interior
gaps by linear interpolation on price levels -> take log returns.

Interpolation works on price levels, not log prices, and never
extrapolates: a missing day before the first or after the last
observation is an error, because inventing data outside the observed
window has no defensible anchor.  Dates are pure calendar dates with no
time-zone or intraday structure.

All functions are pure; series objects are treated as immutable and are
safe to share across threads.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .errors import (
    DuplicateDateError,
    MissingColumnError,
    NoOverlapError,
    NonPositivePriceError,
    TooShortError,
    UnparsableDateError,
    UnparsablePriceError,
)

__all__ = [
    "CsvSchema",
    "PriceSeries",
    "ReturnSeries",
    "parse_price_csv",
    "write_price_csv",
    "fill_calendar_gaps",
    "log_returns",
    "align_panel",
]


@dataclass(frozen=True)
class CsvSchema:
    """Column names of a close-price CSV."""

    date_column: str = "date"
    close_column: str = "close"


@dataclass(frozen=True)
class PriceSeries:
    """Dated close prices for one asset, sorted ascending by date.

    Dates are strictly increasing but not necessarily gap-free until
    :func:`fill_calendar_gaps` has run.
    """

    asset_id: str
    dates: tuple[date, ...]
    closes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        closes = np.asarray(self.closes, dtype=float)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != closes.shape[0]:
            raise ValueError(
                f"{self.asset_id}: {len(self.dates)} dates vs {closes.shape[0]} closes"
            )
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur == prev:
                raise DuplicateDateError(f"{self.asset_id}: duplicate date {cur}")
            if cur < prev:
                raise ValueError(f"{self.asset_id}: dates out of order at {cur}")
        if closes.size and (not np.all(np.isfinite(closes)) or np.any(closes <= 0.0)):
            bad = closes[~(np.isfinite(closes) & (closes > 0.0))][0]
            raise NonPositivePriceError(f"{self.asset_id}: bad close {bad}")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def is_daily(self) -> bool:
        """True when consecutive dates are exactly one calendar day apart."""
        return all(
            (cur - prev).days == 1 for prev, cur in zip(self.dates, self.dates[1:])
        )


@dataclass(frozen=True)
class ReturnSeries:
    """Log returns r[t] = ln(close[t+1] / close[t]), stamped with the later date."""

    asset_id: str
    dates: tuple[date, ...]
    returns: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        returns = np.asarray(self.returns, dtype=float)
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != returns.shape[0]:
            raise ValueError(
                f"{self.asset_id}: {len(self.dates)} dates vs {returns.shape[0]} returns"
            )
        if returns.size and not np.all(np.isfinite(returns)):
            raise ValueError(f"{self.asset_id}: non-finite return")

    def __len__(self) -> int:
        return len(self.dates)


def parse_price_csv(
    path: str | Path,
    schema: CsvSchema = CsvSchema(),
    asset_id: str | None = None,
) -> PriceSeries:
    """Read a close-price CSV into a PriceSeries sorted by date.

    The file needs a header row with the schema's date and close columns;
    dates must be ISO-8601 (YYYY-MM-DD), closes strictly positive.
    Duplicate dates are rejected rather than silently collapsed.
    """
    path = Path(path)
    if asset_id is None:
        asset_id = path.stem
    rows: list[tuple[date, float]] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        for col in (schema.date_column, schema.close_column):
            if col not in header:
                raise MissingColumnError(f"{path}: missing column {col!r} in {header}")
        for lineno, row in enumerate(reader, start=2):
            raw_date = row.get(schema.date_column)
            raw_close = row.get(schema.close_column)
            if raw_date is None or raw_close is None:
                raise UnparsablePriceError(f"{path}:{lineno}: short row")
            try:
                day = date.fromisoformat(raw_date.strip())
            except ValueError as exc:
                raise UnparsableDateError(f"{path}:{lineno}: {raw_date!r}") from exc
            try:
                close = float(raw_close)
            except ValueError as exc:
                raise UnparsablePriceError(f"{path}:{lineno}: {raw_close!r}") from exc
            if not math.isfinite(close) or close <= 0.0:
                raise NonPositivePriceError(f"{path}:{lineno}: close {close}")
            rows.append((day, close))
    rows.sort(key=lambda item: item[0])
    for (d1, _), (d2, _) in zip(rows, rows[1:]):
        if d1 == d2:
            raise DuplicateDateError(f"{path}: duplicate date {d1}")
    return PriceSeries(
        asset_id=asset_id,
        dates=tuple(day for day, _ in rows),
        closes=np.array([close for _, close in rows], dtype=float),
    )


def write_price_csv(series: PriceSeries, path: str | Path, schema: CsvSchema = CsvSchema()) -> None:
    """Serialize a PriceSeries back to the input CSV shape."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([schema.date_column, schema.close_column])
        for day, close in zip(series.dates, series.closes):
            writer.writerow([day.isoformat(), repr(float(close))])


def fill_calendar_gaps(series: PriceSeries) -> PriceSeries:
    """Cover every calendar day between the first and last observation.

    Missing days get the linear interpolation (in price levels) between
    the nearest observed closes on either side; observed closes are kept
    bit-for-bit.  Idempotent.
    """
    if len(series) < 2:
        raise TooShortError(f"{series.asset_id}: need >= 2 observations to fill gaps")
    first, last = series.dates[0], series.dates[-1]
    n_days = (last - first).days + 1
    if n_days == len(series):
        return series
    observed_offsets = np.array([(d - first).days for d in series.dates], dtype=float)
    all_offsets = np.arange(n_days, dtype=float)
    closes = np.interp(all_offsets, observed_offsets, series.closes)
    # keep original closes exactly where observed (np.interp already does,
    # but make the guarantee explicit against float-offset edge cases)
    closes[observed_offsets.astype(int)] = series.closes
    dates = tuple(first + timedelta(days=int(k)) for k in range(n_days))
    return PriceSeries(asset_id=series.asset_id, dates=dates, closes=closes)


def log_returns(series: PriceSeries) -> ReturnSeries:
    """Successive log differences of the close price; length shrinks by one."""
    if len(series) < 2:
        raise TooShortError(f"{series.asset_id}: need >= 2 closes for returns")
    returns = np.diff(np.log(series.closes))
    return ReturnSeries(
        asset_id=series.asset_id,
        dates=series.dates[1:],
        returns=returns,
    )


def align_panel(series_list: list[PriceSeries]) -> list[PriceSeries]:
    """Trim a panel to its common date window and fill every gap.

    The window is [max of first dates, min of last dates].  Each series
    is gap-filled before trimming so the window endpoints always carry a
    price.  Outputs share one date vector.
    """
    if not series_list:
        return []
    start = max(s.dates[0] for s in series_list)
    end = min(s.dates[-1] for s in series_list)
    if (end - start).days < 1:
        raise NoOverlapError(
            f"common window [{start}, {end}] spans fewer than 2 calendar days"
        )
    aligned = []
    for series in series_list:
        filled = fill_calendar_gaps(series)
        lo = (start - filled.dates[0]).days
        hi = (end - filled.dates[0]).days + 1
        aligned.append(
            replace(filled, dates=filled.dates[lo:hi], closes=filled.closes[lo:hi])
        )
    return aligned
