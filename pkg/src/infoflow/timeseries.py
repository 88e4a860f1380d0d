"""Price ingestion, alignment, log returns, and summary statistics.

The loader consumes a wide-format CSV (``date,<code1>,<code2>,...``, one
row per trading day, ISO-8601 dates). Rows with any missing price are
dropped for all sectors so that every series shares a single date axis;
downstream pairwise estimation requires time-aligned samples.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

import numpy as np

# Critical value of the Jarque-Bera statistic at the 1% level used to
# flag non-normal return distributions.
JB_CRITICAL_1PCT = 9.442

# Cell contents treated as a missing price (row is dropped for all sectors).
_MISSING_TOKENS = {"", "na", "nan", "null", "none"}


class DatasetError(ValueError):
    """Raised when an input file violates the wide-format CSV contract."""


@dataclass(frozen=True)
class SectorMeta:
    """Identity of one sector: 6-character code plus human-readable name."""

    code: str
    name: str = ""

    def __post_init__(self):
        if len(self.code) < 3:
            raise ValueError(f"sector code too short: {self.code!r}")

    @property
    def short_code(self) -> str:
        """Last three digits of the code, used as the display label."""
        return self.code[-3:]


def _freeze(values, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeries:
    """Daily closing prices of one sector on a strictly increasing date axis."""

    sector: SectorMeta
    dates: tuple[date, ...]
    closes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "closes", _freeze(self.closes, np.float64))
        if len(self.dates) != len(self.closes):
            raise ValueError("dates and closes differ in length")
        if len(self.dates) < 2:
            raise ValueError("price series needs at least 2 observations")
        if not np.all(self.closes > 0):
            raise ValueError("non-positive price")
        if any(a >= b for a, b in zip(self.dates, self.dates[1:])):
            raise ValueError("dates not strictly increasing")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class ReturnSeries:
    """Daily logarithmic returns; each value is dated by the later close."""

    sector: SectorMeta
    dates: tuple[date, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", _freeze(self.values, np.float64))
        if len(self.dates) != len(self.values):
            raise ValueError("dates and values differ in length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite return value")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class SummaryStats:
    """Moment summary of a return series plus the Jarque-Bera normality test.

    ``kurtosis`` is the raw standardized fourth moment (normal = 3, not
    excess).  ``jb_statistic`` is (n/6) * (S^2 + (K-3)^2 / 4) and the
    rejection flag compares it against the 1%-level critical value 9.442.
    """

    mean: float
    max: float
    min: float
    std: float
    skewness: float
    kurtosis: float
    jb_statistic: float
    jb_reject_at_1pct: bool


def load_sector_names(source: str | Path) -> dict[str, str]:
    """Read an optional ``code,name`` metadata CSV into a code -> name map."""
    path = Path(source)
    if not path.exists():
        raise DatasetError("input not found")
    names: dict[str, str] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["code", "name"]:
            raise DatasetError("malformed header in sector-metadata CSV")
        for row in reader:
            if not row:
                continue
            names[row[0].strip()] = row[1].strip() if len(row) > 1 else ""
    return names


def load_dataset(
    source: str | Path,
    names: dict[str, str] | None = None,
) -> list[PriceSeries]:
    """Load a wide-format price CSV into one aligned PriceSeries per sector.

    Rows containing any missing cell are dropped for every sector, so all
    returned series share one date axis.  Dates must be ISO-8601 and
    strictly increasing; prices must be positive numbers.

    Raises DatasetError on a malformed header, unparsable or non-positive
    price, non-monotone dates, or fewer than 2 shared rows.
    """
    path = Path(source)
    if not path.exists():
        raise DatasetError("input not found")
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if not header or header[0].strip().lower() != "date" or len(header) < 2:
            raise DatasetError("malformed header: expected 'date,<code>,...'")
        codes = [c.strip() for c in header[1:]]
        if any(not c for c in codes) or len(set(codes)) != len(codes):
            raise DatasetError("malformed header: empty or duplicate sector codes")

        kept_dates: list[date] = []
        kept_rows: list[list[float]] = []
        previous: date | None = None
        dropped = 0
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(codes) + 1:
                raise DatasetError(f"row {lineno}: expected {len(codes) + 1} columns")
            try:
                day = date.fromisoformat(row[0].strip())
            except ValueError as exc:
                raise DatasetError(f"row {lineno}: invalid ISO-8601 date {row[0]!r}") from exc
            if previous is not None and day <= previous:
                raise DatasetError(f"row {lineno}: dates not strictly increasing")
            previous = day

            prices: list[float] = []
            missing = False
            for code, cell in zip(codes, row[1:]):
                text = cell.strip()
                if text.lower() in _MISSING_TOKENS:
                    missing = True
                    continue
                try:
                    value = float(text)
                except ValueError as exc:
                    raise DatasetError(f"row {lineno}: unparsable price {cell!r}") from exc
                if math.isnan(value):
                    missing = True
                    continue
                if value <= 0 or math.isinf(value):
                    raise DatasetError(
                        f"row {lineno}: non-positive or non-finite price for {code}"
                    )
                prices.append(value)
            if missing:
                dropped += 1
                continue
            kept_dates.append(day)
            kept_rows.append(prices)

    if dropped:
        warnings.warn(
            f"dropped {dropped} row(s) with missing prices to keep all sectors aligned",
            stacklevel=2,
        )
    if len(kept_rows) < 2:
        raise DatasetError("fewer than 2 shared rows after alignment")

    matrix = np.asarray(kept_rows, dtype=np.float64)
    dates = tuple(kept_dates)
    names = names or {}
    return [
        PriceSeries(SectorMeta(code, names.get(code, "")), dates, matrix[:, j])
        for j, code in enumerate(codes)
    ]


def log_returns(p: PriceSeries) -> ReturnSeries:
    """Log returns ln(close[t+1]) - ln(close[t]), dated by the later close."""
    values = np.diff(np.log(p.closes))
    return ReturnSeries(p.sector, p.dates[1:], values)


def summary_stats(r: ReturnSeries) -> SummaryStats:
    """Moment summary and Jarque-Bera test of a return series.

    Standard deviation uses the 1/(n-1) normalization; skewness and
    kurtosis are the standardized third and fourth sample moments on the
    1/n central moments, which is the convention the JB statistic assumes.
    """
    v = r.values
    n = len(v)
    if n < 4:
        raise ValueError("summary_stats needs at least 4 observations")
    mean = float(v.mean())
    centered = v - mean
    m2 = float((centered**2).mean())
    if m2 == 0.0:
        raise ValueError("degenerate series: zero variance")
    m3 = float((centered**3).mean())
    m4 = float((centered**4).mean())
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    jb = n / 6.0 * (skew**2 + (kurt - 3.0) ** 2 / 4.0)
    return SummaryStats(
        mean=mean,
        max=float(v.max()),
        min=float(v.min()),
        std=float(v.std(ddof=1)),
        skewness=skew,
        kurtosis=kurt,
        jb_statistic=jb,
        jb_reject_at_1pct=bool(jb > JB_CRITICAL_1PCT),
    )


def slice_returns(r: ReturnSeries, window: tuple[date, date]) -> ReturnSeries:
    """Restrict a return series to the closed date interval ``window``."""
    start, end = window
    if start > end:
        raise ValueError("empty interval")
    keep = [i for i, d in enumerate(r.dates) if start <= d <= end]
    if not keep:
        raise ValueError("empty result")
    dates = tuple(r.dates[i] for i in keep)
    return ReturnSeries(r.sector, dates, r.values[keep])
