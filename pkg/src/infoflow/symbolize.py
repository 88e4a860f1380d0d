"""Equal-width amplitude discretization of return series.

Returns are mapped onto symbols 1..q by splitting the observed range into
q equal-width bins.  Bin k covers [x_min + (k-1)*width, x_min + k*width)
for k < q; the top bin is closed on the right so the maximum observation
receives symbol q instead of falling off the partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .timeseries import ReturnSeries, SectorMeta, _freeze

DEFAULT_Q = 15


@dataclass(frozen=True)
class Partition:
    """Equal-width bin layout over the closed range [x_min, x_max]."""

    q: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if not self.x_max > self.x_min:
            raise ValueError("degenerate partition: x_max must exceed x_min")

    @property
    def width(self) -> float:
        return (self.x_max - self.x_min) / self.q


@dataclass(frozen=True)
class SymbolSeries:
    """Discretized return series: integer symbols in [1, q] on the source dates."""

    sector: SectorMeta
    partition: Partition
    dates: tuple[date, ...]
    symbols: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "symbols", _freeze(self.symbols, np.int64))
        if len(self.dates) != len(self.symbols):
            raise ValueError("dates and symbols differ in length")
        if len(self.symbols) and (
            self.symbols.min() < 1 or self.symbols.max() > self.partition.q
        ):
            raise ValueError("symbol outside [1, q]")

    def __len__(self) -> int:
        return len(self.symbols)


def make_partition(r: ReturnSeries, q: int = DEFAULT_Q) -> Partition:
    """Partition spanning the observed min/max of ``r`` with q bins.

    Constant series have zero range and cannot be partitioned.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    lo = float(r.values.min())
    hi = float(r.values.max())
    if hi == lo:
        raise ValueError("degenerate series: constant values")
    return Partition(q=q, x_min=lo, x_max=hi)


def encode(r: ReturnSeries, p: Partition) -> SymbolSeries:
    """Map each return to its bin index, 1-based.

    symbol = 1 + floor((x - x_min) / width), clamped so x == x_max lands in
    the top bin.  Values outside [x_min, x_max] are an error: the partition
    must have been built from this series or a superset of its range.
    """
    v = r.values
    if len(v) and (v.min() < p.x_min or v.max() > p.x_max):
        raise ValueError("value outside partition range")
    raw = np.floor((v - p.x_min) / p.width).astype(np.int64) + 1
    symbols = np.minimum(raw, p.q)
    return SymbolSeries(r.sector, p, r.dates, symbols)


def symbolize_returns(r: ReturnSeries, q: int = DEFAULT_Q) -> SymbolSeries:
    """Convenience: build the window-local partition of ``r`` and encode it."""
    return encode(r, make_partition(r, q))
