"""Multifractal detrended fluctuation analysis.

Pipeline: profile -> per-segment polynomial detrending -> q-th order
fluctuation functions F_q(s) over a (q, s) grid -> log-log slopes h(q).
``partition_tau`` estimates tau(q) directly from box sums of a measure and
serves as an independent cross-check of tau(q) = q h(q) - 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import ConfigError, DataError, DegeneracyError, InsufficientDataError
from .series import Profile, as_series, profile

__all__ = [
    "GridSpec",
    "FluctuationSurface",
    "HurstSpectrum",
    "PartitionTau",
    "q_grid",
    "log_scales",
    "segment_variances",
    "fluctuation_surface",
    "fit_hurst",
    "partition_tau",
    "mfdfa",
    "VARIANCE_FLOOR",
]

VARIANCE_FLOOR = 1e-300
# residual RMS below this fraction of a segment's amplitude is rounding noise
ZERO_RESIDUAL_RTOL = 1e-13


def q_grid(q_min: float = -10.0, q_max: float = 10.0, q_step: float = 0.5) -> np.ndarray:
    """Evenly stepped q values; exact multiples of the step so that 0 and 2 land on the grid."""
    if q_step <= 0 or q_max < q_min:
        raise ConfigError(f"bad q grid [{q_min}, {q_max}] step {q_step}")
    n = int(round((q_max - q_min) / q_step))
    if not np.isclose(q_min + n * q_step, q_max):
        raise ConfigError(f"q range [{q_min}, {q_max}] is not a multiple of step {q_step}")
    return q_min + q_step * np.arange(n + 1)


def log_scales(s_min: int, s_max: int, n: int = 30) -> np.ndarray:
    """Up to n logarithmically spaced unique integers in [s_min, s_max]."""
    if s_min < 1 or s_max < s_min:
        raise ConfigError(f"bad scale bounds [{s_min}, {s_max}]")
    s = np.geomspace(s_min, s_max, n)
    return np.unique(np.round(s).astype(np.int64))


@dataclass(frozen=True, eq=False)
class GridSpec:
    """q values, integer scales and detrending order for one MF-DFA run."""

    q_values: np.ndarray
    scales: np.ndarray
    detrend_order: int = 2

    def __post_init__(self):
        q = np.array(self.q_values, dtype=float)
        s = np.array(self.scales)
        if q.ndim != 1 or q.size == 0 or not np.all(np.isfinite(q)):
            raise ConfigError("q_values must be a non-empty finite 1-d sequence")
        if np.any(np.diff(q) <= 0):
            raise ConfigError("q_values must be strictly increasing")
        if s.ndim != 1 or s.size == 0 or np.any(s != np.round(s)):
            raise ConfigError("scales must be a non-empty 1-d sequence of integers")
        s = s.astype(np.int64)
        if np.any(np.diff(s) <= 0):
            raise ConfigError("scales must be strictly increasing")
        m = int(self.detrend_order)
        if m < 1 or m != self.detrend_order:
            raise ConfigError(f"detrend order must be a positive integer, got {self.detrend_order!r}")
        if s[0] < m + 2:
            raise ConfigError(f"scale {s[0]} below minimum m + 2 = {m + 2}")
        q.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "q_values", q)
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "detrend_order", m)

    @classmethod
    def default(cls, n: int, order: int = 2, *, q_min=-10.0, q_max=10.0, q_step=0.5,
                s_min: Optional[int] = None, s_max: Optional[int] = None, n_scales: int = 30):
        s_min = max(6, order + 2) if s_min is None else s_min
        s_max = n // 5 if s_max is None else s_max
        return cls(q_grid(q_min, q_max, q_step), log_scales(s_min, s_max, n_scales), order)

    def validate(self, n: int) -> None:
        """Check the scales against a series of length n (largest scale at most n/4)."""
        if 4 * int(self.scales[-1]) > n:
            raise ConfigError(f"scale {int(self.scales[-1])} exceeds N/4 for N = {n}")


@dataclass(frozen=True, eq=False)
class FluctuationSurface:
    """F_q(s) on the grid; ``values[i, j]`` is for ``q_values[i]`` and ``scales[j]``.

    ``flags[i, j]`` marks cells whose value depends on a variance that was
    floored at ``VARIANCE_FLOOR`` (only possible for q <= 0).
    """

    grid: GridSpec
    values: np.ndarray
    n_segments: np.ndarray
    flags: np.ndarray

    @property
    def q_values(self):
        return self.grid.q_values

    @property
    def scales(self):
        return self.grid.scales


@dataclass(frozen=True, eq=False)
class HurstSpectrum:
    q_values: np.ndarray
    h: np.ndarray
    stderr: np.ndarray
    intercept: np.ndarray
    fit_range: tuple
    scales_used: np.ndarray

    @property
    def tau(self) -> np.ndarray:
        return self.q_values * self.h - 1.0

    def h_at(self, q: float) -> float:
        idx = np.flatnonzero(np.isclose(self.q_values, q, rtol=0, atol=1e-12))
        if idx.size == 0:
            raise ConfigError(f"q = {q} not on the grid")
        return float(self.h[idx[0]])

    @property
    def gamma(self) -> float:
        """Correlation exponent 2 - 2 h(2) (NaN if q = 2 is not on the grid)."""
        try:
            return 2.0 - 2.0 * self.h_at(2.0)
        except ConfigError:
            return float("nan")

    @property
    def beta(self) -> float:
        """Power-spectrum exponent 2 h(2) - 1."""
        try:
            return 2.0 * self.h_at(2.0) - 1.0
        except ConfigError:
            return float("nan")


def _detrend_basis(s: int, m: int) -> np.ndarray:
    # orthonormal basis of degree-m polynomials on s points; projecting onto it
    # is the least-squares fit without forming normal equations
    x = np.linspace(-1.0, 1.0, s)
    q, _ = np.linalg.qr(np.vander(x, m + 1, increasing=True))
    return q


def _segments(y: np.ndarray, s: int) -> np.ndarray:
    n = y.size
    ns = n // s
    if ns < 1:
        raise ConfigError(f"scale {s} larger than series length {n}")
    head = y[: ns * s].reshape(ns, s)
    # segments N_s+1..2N_s run backwards from the end of the profile
    tail = y[n - ns * s :].reshape(ns, s)[::-1]
    return np.concatenate([head, tail])


def segment_variances(prof, s: int, m: int = 2) -> np.ndarray:
    """F^2(p, s) for the 2 N_s segments (forward from the start, then backward from the end).

    Each entry is the mean squared residual of an order-m least-squares
    polynomial fit within the segment. Segments that are polynomial up to
    rounding (residual RMS below 1e-13 of the segment amplitude) get exactly 0.
    """
    y = prof.cumulative if isinstance(prof, Profile) else np.asarray(prof, dtype=float)
    s = int(s)
    if s < m + 2:
        raise ConfigError(f"scale {s} below minimum m + 2 = {m + 2}")
    segs = _segments(y, s)
    basis = _detrend_basis(s, m)
    resid = segs - (segs @ basis) @ basis.T
    f2 = np.mean(resid * resid, axis=1)
    amp = np.abs(segs).max(axis=1)
    f2[f2 <= (ZERO_RESIDUAL_RTOL * amp) ** 2] = 0.0
    return f2


def _generalized_mean(f2: np.ndarray, q_values: np.ndarray) -> np.ndarray:
    # log-domain evaluation; avoids overflow of (F^2)^(q/2) at |q| ~ 10
    log_f2 = np.log(f2)
    n = f2.size
    out = np.empty(q_values.size)
    for i, q in enumerate(q_values):
        if q == 0:
            out[i] = 0.5 * log_f2.mean()
        else:
            out[i] = (logsumexp(0.5 * q * log_f2) - np.log(n)) / q
    return np.exp(out)


def fluctuation_surface(prof, grid: GridSpec) -> FluctuationSurface:
    """Compute F_q(s) for every (q, s) of the grid.

    Zero-variance segments are floored at ``VARIANCE_FLOOR``; the affected
    q <= 0 cells are flagged and a warning lists them. A scale where every
    segment has zero variance raises DegeneracyError.
    """
    if not isinstance(prof, Profile):
        prof = profile(prof)
    n = len(prof)
    grid.validate(n)
    q = grid.q_values
    values = np.empty((q.size, grid.scales.size))
    flags = np.zeros_like(values, dtype=bool)
    n_segments = np.empty(grid.scales.size, dtype=np.int64)
    for j, s in enumerate(grid.scales):
        f2 = segment_variances(prof, int(s), grid.detrend_order)
        n_segments[j] = f2.size
        zero = f2 <= VARIANCE_FLOOR
        if zero.all():
            raise DegeneracyError(f"all segments have zero variance at scale s = {int(s)}")
        if zero.any():
            f2 = np.where(zero, VARIANCE_FLOOR, f2)
            flags[:, j] = q <= 0
        values[:, j] = _generalized_mean(f2, q)
    if flags.any():
        cells = [(float(q[i]), int(grid.scales[j])) for i, j in zip(*np.nonzero(flags))]
        warnings.warn(f"zero-variance segments floored; affected (q, s) cells: {cells}",
                      RuntimeWarning, stacklevel=2)
    logv = np.log(values)
    if np.any(np.diff(logv, axis=0) < -1e-9):
        raise DegeneracyError("fluctuation surface violates moment monotonicity in q")
    for a in (values, flags, n_segments):
        a.setflags(write=False)
    return FluctuationSurface(grid, values, n_segments, flags)


def _slopes(x: np.ndarray, ys: np.ndarray):
    """Least-squares slope, intercept and slope standard error of each row of ys on x."""
    xm = x.mean()
    dx = x - xm
    sxx = dx @ dx
    slope = (ys - ys.mean(axis=1, keepdims=True)) @ dx / sxx
    intercept = ys.mean(axis=1) - slope * xm
    resid = ys - intercept[:, None] - slope[:, None] * x
    dof = x.size - 2
    stderr = np.sqrt((resid * resid).sum(axis=1) / dof / sxx) if dof > 0 else np.full(ys.shape[0], np.nan)
    return slope, intercept, stderr


def fit_hurst(surface: FluctuationSurface, fit_range: Optional[Sequence[float]] = None) -> HurstSpectrum:
    """h(q) as the slope of ln F_q(s) against ln s over the scales in ``fit_range`` (inclusive).

    Scales are weighted uniformly in ln s. Without a range every scale of
    the surface is used.
    """
    scales = surface.scales
    if fit_range is None:
        fit_range = (int(scales[0]), int(scales[-1]))
    lo, hi = fit_range
    if lo > hi:
        raise ConfigError(f"empty fit range {fit_range}")
    sel = (scales >= lo) & (scales <= hi)
    if sel.sum() < 4:
        raise InsufficientDataError(
            f"fit range [{lo}, {hi}] holds {int(sel.sum())} scales of the surface; need at least 4")
    x = np.log(scales[sel].astype(float))
    ys = np.log(surface.values[:, sel])
    h, c, se = _slopes(x, ys)
    return HurstSpectrum(surface.q_values, h, se, c, (lo, hi), scales[sel])


@dataclass(frozen=True, eq=False)
class PartitionTau:
    q_values: np.ndarray
    tau: np.ndarray
    stderr: np.ndarray
    scales: np.ndarray


def partition_tau(measure, scales, q_values) -> PartitionTau:
    """tau(q) from the scaling of box-probability partition sums, Z_q(s) = sum_p P(p, s)^q ~ s^tau(q).

    The measure is normalized to unit total mass; box sums over
    non-overlapping boxes of length s start at the beginning and drop any
    trailing remainder. Empty boxes are excluded for q <= 0.
    """
    x = as_series(measure).values
    if np.any(x < 0):
        raise DataError("measure must be non-negative", index=int(np.flatnonzero(x < 0)[0]))
    total = x.sum()
    if not total > 0:
        raise DegeneracyError("measure has zero total mass")
    x = x / total
    y = np.concatenate([[0.0], np.cumsum(x)])
    q = np.asarray(q_values, dtype=float)
    scales = np.asarray(scales, dtype=np.int64)
    if scales.size < 2:
        raise InsufficientDataError("need at least two scales")
    logz = np.empty((q.size, scales.size))
    for j, s in enumerate(scales):
        nb = x.size // s
        if nb < 1:
            raise ConfigError(f"scale {s} larger than measure length {x.size}")
        p = y[s : nb * s + 1 : s] - y[0 : (nb - 1) * s + 1 : s]
        pos = p[p > 0]
        if pos.size == 0:
            raise DegeneracyError(f"every box is empty at scale {s}")
        # empty boxes add nothing for q > 0 and are excluded for q <= 0
        lp = np.log(pos)
        logz[:, j] = [logsumexp(qi * lp) for qi in q]
    tau, _, se = _slopes(np.log(scales.astype(float)), logz)
    return PartitionTau(q, tau, se, scales)


def mfdfa(series, grid: Optional[GridSpec] = None, fit_range=None, order: int = 2):
    """Convenience wrapper: profile, surface and h(q) in one call.

    Returns ``(surface, spectrum)``.
    """
    ts = as_series(series)
    if grid is None:
        grid = GridSpec.default(len(ts), order)
    surface = fluctuation_surface(profile(ts), grid)
    return surface, fit_hurst(surface, fit_range)
