"""Autocorrelation, decay-law classification and CCDF tail exponents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DegeneracyError, InsufficientDataError
from .series import as_series, normalize_returns

__all__ = [
    "AutocorrelationResult",
    "DecayClassification",
    "TailEstimate",
    "autocorrelation",
    "classify_decay",
    "tail_exponent",
    "ccdf_exponent",
]

R2_THRESHOLD = 0.7
MIN_POSITIVE_LAGS = 5
MIN_TAIL_POINTS = 10


@dataclass(frozen=True, eq=False)
class AutocorrelationResult:
    lags: np.ndarray
    values: np.ndarray
    n_source: int

    def stderr(self) -> float:
        """Large-sample standard error 1/sqrt(N) of C(s) under the white-noise null."""
        return 1.0 / np.sqrt(self.n_source)


@dataclass(frozen=True)
class DecayClassification:
    law: str  # "power_law" | "exponential" | "uncorrelated"
    gamma: Optional[float] = None
    s0: Optional[float] = None
    fit_quality: float = 0.0


@dataclass(frozen=True)
class TailEstimate:
    zeta: float
    tail_fraction: float
    n_tail: int
    stderr: float = float("nan")


def autocorrelation(series, max_lag: int) -> AutocorrelationResult:
    """C(s) = [1/(N-s) sum_i xb_i xb_{i+s}] / <xb^2> for s = 1..max_lag, xb = x - <x>.

    The variance uses the 1/N convention; each lag averages exactly N - s
    products. Computed via FFT, which is exact up to rounding.
    """
    x = as_series(series).values
    n = x.size
    if int(max_lag) != max_lag or max_lag < 1:
        raise ConfigError(f"max_lag must be a positive integer, got {max_lag!r}")
    if 2 * max_lag >= n:
        raise ConfigError(f"max_lag {max_lag} must be below N/2 = {n / 2}")
    xb = x - x.mean()
    var = np.mean(xb * xb)
    if not var > 0:
        raise DegeneracyError("zero variance: autocorrelation undefined")
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.fft.rfft(xb, nfft)
    acov = np.fft.irfft(spec * np.conj(spec), nfft)[: max_lag + 1]
    lags = np.arange(1, max_lag + 1)
    c = acov[1:] / (n - lags) / var
    return AutocorrelationResult(lags, c, n)


def _linfit(x, y):
    a = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = y - (slope * x + icpt)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return slope, icpt, r2


def classify_decay(acf: AutocorrelationResult, fit_range: Sequence[int]) -> DecayClassification:
    """Decide between power-law, exponential and no decay over lags in ``fit_range``.

    Fits ln C against ln s (power law, C ~ s^-gamma) and against s
    (exponential, C ~ exp(-s/s0)) using only lags with C(s) > 0. A law is a
    candidate when its R^2 exceeds 0.7 and its exponent is admissible
    (0 < gamma < 1, s0 > 0); the candidate with the higher R^2 wins.
    """
    lo, hi = fit_range
    sel = (acf.lags >= lo) & (acf.lags <= hi) & (acf.values > 0)
    if sel.sum() < MIN_POSITIVE_LAGS:
        return DecayClassification("uncorrelated", fit_quality=0.0)
    s = acf.lags[sel].astype(float)
    lc = np.log(acf.values[sel])
    candidates = []
    slope, _, r2 = _linfit(np.log(s), lc)
    if r2 > R2_THRESHOLD and 0 < -slope < 1:
        candidates.append((r2, DecayClassification("power_law", gamma=float(-slope), fit_quality=float(r2))))
    slope, _, r2 = _linfit(s, lc)
    if r2 > R2_THRESHOLD and slope < 0:
        candidates.append((r2, DecayClassification("exponential", s0=float(-1.0 / slope), fit_quality=float(r2))))
    if not candidates:
        return DecayClassification("uncorrelated", fit_quality=0.0)
    return max(candidates, key=lambda c: c[0])[1]


def ccdf_exponent(magnitudes, tail_fraction: float = 0.05):
    """Negative slope of ln P(X >= x) against ln x over the largest order statistics.

    The empirical survival probability of the i-th largest value is i/N.
    Returns ``(zeta, n_tail, stderr)``. The standard error is the asymptotic
    zeta * sqrt(2 / n_tail) of the rank regression; the naive OLS error is far
    too small because neighbouring order statistics are strongly correlated.
    """
    x = np.sort(np.abs(np.asarray(magnitudes, dtype=float)))[::-1]
    n = x.size
    if not 0 < tail_fraction <= 0.5:
        raise ConfigError(f"tail_fraction must lie in (0, 0.5], got {tail_fraction}")
    k = int(np.floor(tail_fraction * n))
    if k < MIN_TAIL_POINTS:
        raise InsufficientDataError(f"only {k} tail points; need at least {MIN_TAIL_POINTS}")
    top = x[:k]
    if top[-1] <= 0:
        raise InsufficientDataError("tail contains zero magnitudes")
    lx = np.log(top)
    lp = np.log(np.arange(1, k + 1) / n)
    slope, _, _ = _linfit(lx, lp)
    zeta = float(-slope)
    return zeta, k, abs(zeta) * float(np.sqrt(2.0 / k))


def tail_exponent(returns, tail_fraction: float = 0.05) -> TailEstimate:
    """Tail exponent zeta of the normalized-return distribution, P(|r| > x) ~ x^-zeta."""
    r = normalize_returns(returns).values
    zeta, k, se = ccdf_exponent(r, tail_fraction)
    if not zeta > 0:
        raise DegeneracyError(f"non-positive tail exponent {zeta}")
    return TailEstimate(zeta, tail_fraction, k, se)
