"""Core time-series types, delay-block views, and CSV ingestion.

Conventions: series indices are reported 1-based (t = 1..T) in all
outputs, matching the usual time-series notation; internal storage is
0-based numpy. A "future index" t labels the pair (past block, x_t)
whose past block ends at t-1.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import OrderTooLarge, TooShort


@dataclass(frozen=True)
class Series:
    """A finite scalar time series with optional event timestamps.

    Parameters
    ----------
    values : array-like of float
        The observations, e.g. interevent intervals in seconds.
    timestamps : array-like of float, optional
        Strictly increasing event times aligned with ``values``.
    label : str
        Free-text description.
    """

    values: np.ndarray
    timestamps: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("values must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must all be finite")
        object.__setattr__(self, "values", values)
        values.setflags(write=False)
        if self.timestamps is not None:
            ts = np.asarray(self.timestamps, dtype=float)
            if ts.shape != values.shape:
                raise ValueError("timestamps must match values in length")
            if not np.all(np.isfinite(ts)):
                raise ValueError("timestamps must all be finite")
            if ts.size > 1 and not np.all(np.diff(ts) > 0):
                raise ValueError("timestamps must be strictly increasing")
            object.__setattr__(self, "timestamps", ts)
            ts.setflags(write=False)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class HistoryBlock:
    """A length-p block of past values ordered oldest to newest."""

    past: np.ndarray
    origin_index: int | None = None

    def __post_init__(self):
        past = np.asarray(self.past, dtype=float)
        if past.ndim != 1 or past.size < 1:
            raise ValueError("past must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(past)):
            raise ValueError("past entries must be finite")
        object.__setattr__(self, "past", past)
        past.setflags(write=False)

    @property
    def order(self):
        return self.past.size


@dataclass(frozen=True)
class EstimationConfig:
    """Knobs for bandwidth/order selection and entropy quadrature.

    ``block_half_width`` is the half-width l of the leave-out window in
    block cross-validation (2l+1 points removed around each evaluation);
    ``smoothed_out_threshold`` is the multiplier m in the lag-screening
    rule bandwidth >= max(5, m * sample std).
    """

    max_order: int = 12
    block_half_width: int = 50
    smoothed_out_threshold: float = 5.0
    rng_seed: int = 0
    quadrature_abs_tol: float = 1e-6

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be positive")
        if self.block_half_width < 0:
            raise ValueError("block_half_width must be nonnegative")
        if self.smoothed_out_threshold <= 0:
            raise ValueError("smoothed_out_threshold must be positive")
        if self.quadrature_abs_tol <= 0:
            raise ValueError("quadrature_abs_tol must be positive")

    def validate_for(self, series: Series):
        T = len(series)
        if self.max_order >= T - 2 * self.block_half_width - 1:
            raise ValueError(
                "max_order must satisfy max_order < T - 2l - 1 "
                f"(got max_order={self.max_order}, T={T}, l={self.block_half_width})"
            )


def embed(values: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the (T-p, p) matrix of pasts and the (T-p,) vector of futures.

    Row j holds values[j:j+p] (oldest to newest) with future values[j+p],
    i.e. the pair indexed by future time t = p+1+j (1-based).
    """
    values = np.asarray(values, dtype=float)
    T = values.size
    if p < 1:
        raise ValueError("order must be >= 1")
    if p + 1 > T:
        raise OrderTooLarge(f"order {p} needs at least {p + 1} observations, have {T}")
    pasts = np.lib.stride_tricks.sliding_window_view(values, p)[: T - p]
    futures = values[p:]
    return np.ascontiguousarray(pasts), futures


def delay_blocks(s: Series, p: int) -> list[tuple[HistoryBlock, float]]:
    """Materialize all (history block, future value) pairs of order p.

    Returns exactly T - p pairs; pair j has past values[j:j+p], future
    values[j+p], and origin_index p+1+j (the 1-based future time).
    """
    pasts, futures = embed(s.values, p)
    return [
        (HistoryBlock(pasts[j], origin_index=p + 1 + j), float(futures[j]))
        for j in range(futures.size)
    ]


def summary_stats(s: Series) -> tuple[float, float, float, float]:
    """Return (mean, std, min, max); std uses the n-1 denominator."""
    if len(s) < 2:
        raise TooShort("need at least 2 observations for the standard deviation")
    v = s.values
    return float(v.mean()), float(v.std(ddof=1)), float(v.min()), float(v.max())


def read_csv(path_or_file, label: str = "") -> Series:
    """Read a series from CSV.

    Accepts a single column of values (optional header ``value``) or two
    columns ``time,value``. Decimal point '.', UTF-8.
    """
    if hasattr(path_or_file, "read"):
        return _parse_csv(path_or_file, label)
    with open(path_or_file, "r", encoding="utf-8") as fh:
        return _parse_csv(fh, label or str(path_or_file))


def _parse_csv(fh: io.TextIOBase, label: str) -> Series:
    times, values = [], []
    has_time = None
    for row in csv.reader(fh):
        if not row or row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row if c.strip() != ""]
        if not cells:
            continue
        if has_time is None and not _is_number(cells[0]):
            # header row: either "value" or "time,value"
            has_time = len(cells) == 2
            continue
        if has_time is None:
            has_time = len(cells) == 2
        if has_time:
            if len(cells) != 2:
                raise ValueError(f"expected time,value row, got: {row}")
            times.append(float(cells[0]))
            values.append(float(cells[1]))
        else:
            if len(cells) != 1:
                raise ValueError(f"expected single-value row, got: {row}")
            values.append(float(cells[0]))
    if not values:
        raise ValueError("no data rows in CSV input")
    return Series(
        np.array(values), np.array(times) if has_time else None, label=label
    )


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def write_csv(s: Series, path, trailers: dict | None = None):
    """Write a series as ``value`` or ``time,value`` CSV with # trailers."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if s.timestamps is not None:
            fh.write("time,value\n")
            for t, v in zip(s.timestamps, s.values):
                fh.write(f"{float(t)!r},{float(v)!r}\n")
        else:
            fh.write("value\n")
            for v in s.values:
                fh.write(f"{float(v)!r}\n")
        for key, val in (trailers or {}).items():
            fh.write(f"# {key}={val}\n")
