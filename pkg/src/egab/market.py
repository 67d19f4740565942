"""Market data container, CSV ingestion and synthetic data generation.

The canonical input format is a CSV of price relatives: a header row of
asset identifiers, then one row per trading period with the per-asset
growth factors p_t / p_{t-1}. An optional leading column whose header is
"date" (ISO-8601 values) is retained for reports but ignored by the math.
Raw-price files can be converted on load (each row divided by the
previous one).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

__all__ = ["MarketData", "load_dataset", "generate_synthetic", "write_dataset"]


@dataclass
class MarketData:
    """T x N matrix of strictly positive price relatives."""

    relatives: np.ndarray
    asset_names: list[str]
    dates: list[str] | None = None
    _prices: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.relatives = np.asarray(self.relatives, dtype=float)
        if self.relatives.ndim != 2:
            raise DataError("relatives must be a T x N matrix")
        if not np.all(np.isfinite(self.relatives)) or np.any(self.relatives <= 0.0):
            raise DataError("price relatives must be strictly positive and finite")
        if len(self.asset_names) != self.relatives.shape[1]:
            raise DataError("asset name count does not match column count")

    @property
    def n_periods(self) -> int:
        return self.relatives.shape[0]

    @property
    def n_assets(self) -> int:
        return self.relatives.shape[1]

    @property
    def prices(self) -> np.ndarray:
        """(T+1) x N cumulative price paths with p_0 = 1 for every asset."""
        if self._prices is None:
            paths = np.vstack(
                [np.ones(self.n_assets), np.cumprod(self.relatives, axis=0)]
            )
            object.__setattr__(self, "_prices", paths)
        return self._prices

    def slice_periods(self, t_start: int, t_end: int) -> "MarketData":
        """Sub-market over rows [t_start, t_end); prices restart at 1."""
        if not (0 <= t_start < t_end <= self.n_periods):
            raise DataError(f"invalid period range [{t_start}, {t_end})")
        dates = self.dates[t_start:t_end] if self.dates else None
        return MarketData(self.relatives[t_start:t_end], list(self.asset_names), dates)


def load_dataset(path, prices: bool = False) -> MarketData:
    """Parse a DatasetFile CSV into MarketData.

    With ``prices=True`` the file holds raw prices and relatives are formed
    by row-ratio, consuming the first row as the baseline.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        has_dates = bool(header) and header[0].lower() == "date"
        names = header[1:] if has_dates else header
        if not names:
            raise DataError(f"{path}: header row has no asset columns")
        n_cols = len(header)
        rows, dates = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != n_cols:
                raise DataError(
                    f"{path}:{lineno}: expected {n_cols} columns, got {len(row)}"
                )
            if has_dates:
                dates.append(row[0].strip())
                row = row[1:]
            try:
                values = [float(c) for c in row]
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if any(not np.isfinite(v) or v <= 0.0 for v in values):
                raise DataError(
                    f"{path}:{lineno}: non-positive or non-finite value"
                )
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    matrix = np.asarray(rows, dtype=float)
    if prices:
        if matrix.shape[0] < 2:
            raise DataError(f"{path}: need at least two price rows")
        matrix = matrix[1:] / matrix[:-1]
        if dates:
            dates = dates[1:]
    return MarketData(matrix, names, dates or None)


def write_dataset(data: MarketData, path) -> None:
    """Write MarketData back to the DatasetFile CSV format."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if data.dates:
            writer.writerow(["date"] + data.asset_names)
            for date, row in zip(data.dates, data.relatives):
                writer.writerow([date] + [repr(float(v)) for v in row])
        else:
            writer.writerow(data.asset_names)
            for row in data.relatives:
                writer.writerow([repr(float(v)) for v in row])


def generate_synthetic(
    n_assets: int,
    n_periods: int,
    seed: int = 0,
    drift: float = 0.0002,
    volatility: float = 0.015,
) -> MarketData:
    """Seeded lognormal market for tests and demos."""
    if n_assets < 1 or n_periods < 1:
        raise DataError("need at least one asset and one period")
    rng = np.random.default_rng(seed)
    mu = rng.normal(drift, drift, size=n_assets)
    log_rel = rng.normal(mu, volatility, size=(n_periods, n_assets))
    names = [f"A{i:02d}" for i in range(n_assets)]
    return MarketData(np.exp(log_rel), names)
