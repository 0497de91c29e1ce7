"""Core transforms on raw series: returns, normalization, profile, extrema, shuffling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .errors import ConfigError, DataError, DegeneracyError, InsufficientDataError

__all__ = [
    "TimeSeries",
    "Profile",
    "ExtremaSequence",
    "as_series",
    "log_returns",
    "normalize_returns",
    "profile",
    "extrema_sequence",
    "shuffle",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered finite observations with optional day-resolution dates.

    ``values`` is stored as a read-only float64 array; ``dates``, when given,
    as a read-only ``datetime64[D]`` array of the same length, strictly
    increasing.
    """

    values: np.ndarray
    dates: Optional[np.ndarray] = None
    label: str = ""

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1:
            raise DataError(f"series must be one-dimensional, got shape {v.shape}")
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise DataError(f"non-finite value at index {bad[0]}", index=int(bad[0]))
        object.__setattr__(self, "values", _frozen(v))
        if self.dates is not None:
            d = np.array(self.dates, dtype="datetime64[D]")
            if d.shape != v.shape:
                raise DataError(f"dates length {d.size} != values length {v.size}")
            step = np.diff(d).astype(np.int64)
            if step.size and (step <= 0).any():
                i = int(np.flatnonzero(step <= 0)[0]) + 1
                raise DataError(f"dates not strictly increasing at index {i}", index=i)
            object.__setattr__(self, "dates", _frozen(d))

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def replace(self, values, dates=None, label=None) -> "TimeSeries":
        return TimeSeries(values, dates, self.label if label is None else label)


@dataclass(frozen=True, eq=False)
class Profile:
    """Cumulative sum of the mean-subtracted series, Y(i)."""

    cumulative: np.ndarray
    source_mean: float

    def __len__(self):
        return self.cumulative.size


@dataclass(frozen=True, eq=False)
class ExtremaSequence:
    values: np.ndarray
    window_length: int
    kind: Literal["maxima", "minima"]
    dates: Optional[np.ndarray] = None

    def __len__(self):
        return self.values.size

    def to_series(self, label: str = "") -> TimeSeries:
        return TimeSeries(self.values, self.dates, label or f"{self.kind}(R={self.window_length})")


def as_series(x, min_length: int = 2) -> TimeSeries:
    """Coerce an array-like or TimeSeries, enforcing a minimum length."""
    ts = x if isinstance(x, TimeSeries) else TimeSeries(np.asarray(x, dtype=float))
    if len(ts) < min_length:
        raise InsufficientDataError(f"series length {len(ts)} < {min_length}")
    return ts


def log_returns(prices) -> TimeSeries:
    """R_t = ln P_{t+1} - ln P_t. Dates carry the later day of each pair."""
    ts = as_series(prices)
    p = ts.values
    bad = np.flatnonzero(p <= 0)
    if bad.size:
        i = int(bad[0])
        raise DataError(f"non-positive price {p[i]!r} at index {i}", index=i)
    r = np.diff(np.log(p))
    dates = None if ts.dates is None else ts.dates[1:]
    return TimeSeries(r, dates, ts.label)


def normalize_returns(returns) -> TimeSeries:
    """Subtract the mean and divide by the population standard deviation."""
    ts = as_series(returns)
    x = ts.values
    centered = x - x.mean()
    sigma = np.sqrt(np.mean(centered**2))
    if not sigma > 0 or sigma <= 1e-300:
        raise DegeneracyError("zero variance: cannot normalize a constant series")
    out = centered / sigma
    # second centering pass removes the O(eps) residue of the first
    out -= out.mean()
    return TimeSeries(out, ts.dates, ts.label)


def profile(series) -> Profile:
    ts = as_series(series)
    x = ts.values
    mean = float(x.mean())
    return Profile(_frozen(np.cumsum(x - mean)), mean)


def extrema_sequence(series, R: int, kind: str = "maxima") -> ExtremaSequence:
    """Per-window maxima or minima over consecutive non-overlapping windows of length R.

    A trailing incomplete window is dropped. Dates, if present, are those of
    the last day of each window.
    """
    if kind not in ("maxima", "minima"):
        raise ConfigError(f"kind must be 'maxima' or 'minima', got {kind!r}")
    if int(R) != R or R < 1:
        raise ConfigError(f"window length must be a positive integer, got {R!r}")
    R = int(R)
    ts = as_series(series, min_length=1)
    n = len(ts) // R
    if n == 0:
        raise InsufficientDataError(f"window length {R} exceeds series length {len(ts)}")
    blocks = ts.values[: n * R].reshape(n, R)
    vals = blocks.max(axis=1) if kind == "maxima" else blocks.min(axis=1)
    dates = None if ts.dates is None else _frozen(ts.dates[R - 1 : n * R : R].copy())
    return ExtremaSequence(_frozen(vals), R, kind, dates)


def shuffle(series, seed: int) -> TimeSeries:
    """Seeded uniform random permutation of the values (dates are dropped).

    Uses numpy's PCG64 generator; ``Generator.permutation`` is a Fisher-Yates
    shuffle, so a fixed seed gives a fixed permutation on every platform.
    """
    ts = as_series(series, min_length=1)
    rng = np.random.Generator(np.random.PCG64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)))
    return TimeSeries(rng.permutation(ts.values), None, ts.label)
