"""Singularity spectrum f(alpha) and its complexity parameters."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import bisect

from .errors import ConfigError, DegeneracyError, InsufficientDataError, WidthUndefinedError
from .mfdfa import HurstSpectrum

__all__ = [
    "SingularitySpectrum",
    "ComplexityParams",
    "MultifractalityAttribution",
    "legendre_transform",
    "fit_spectrum",
    "compare_surrogate",
]

CORRELATION_DOMINATED = 0.1
FAT_TAIL_DOMINATED = 0.03
# near-monofractal spectra have narrow data but zeros well outside it
MIN_ROOT_REACH = 0.5


@dataclass(frozen=True, eq=False)
class SingularitySpectrum:
    """Points (alpha, f) with the q that produced each; ``valid`` is False where alpha is non-monotone."""

    alpha: np.ndarray
    f: np.ndarray
    source_q: np.ndarray
    valid: np.ndarray

    def __len__(self):
        return self.alpha.size


@dataclass(frozen=True)
class ComplexityParams:
    """Polynomial fit of f(alpha) expanded around its maximum alpha0.

    ``coefficients`` are (A, B, C, D, E) of
    f = A + B d + C d^2 + D d^3 + E d^4 with d = alpha - alpha0 (D = E = 0
    for a quadratic fit). ``alpha_min``/``alpha_max`` are the zeros of the
    fitted polynomial nearest alpha0.
    """

    alpha0: float
    W: float
    r: float
    B: float
    D: float
    coefficients: tuple
    fit_kind: str
    alpha_min: float = float("nan")
    alpha_max: float = float("nan")
    n_points: int = 0

    def as_dict(self) -> dict:
        return {
            "alpha0": self.alpha0, "W": self.W, "r": self.r, "B": self.B, "D": self.D,
            "coefficients": dict(zip("ABCDE", self.coefficients)),
            "fit_kind": self.fit_kind, "alpha_min": self.alpha_min, "alpha_max": self.alpha_max,
            "n_points": self.n_points,
        }


def legendre_transform(hs: HurstSpectrum, tol: float = 1e-9) -> SingularitySpectrum:
    """alpha = d tau / d q by finite differences, f = q alpha - tau.

    Central differences at interior q, one-sided at the two ends. Points
    where alpha increases with q by more than ``tol`` (both members of the
    offending pair) are flagged invalid but kept.
    """
    q = np.asarray(hs.q_values, dtype=float)
    tau = np.asarray(hs.tau, dtype=float)
    if q.size < 3:
        raise InsufficientDataError("Legendre transform needs at least 3 q values")
    if not np.all(np.isfinite(tau)):
        raise DegeneracyError("tau(q) has non-finite entries")
    alpha = np.gradient(tau, q, edge_order=1)
    f = q * alpha - tau
    rising = np.diff(alpha) > tol
    valid = np.ones(q.size, dtype=bool)
    valid[:-1] &= ~rising
    valid[1:] &= ~rising
    if not valid.any():
        raise DegeneracyError("Legendre transform failed: alpha is non-monotone everywhere")
    return SingularitySpectrum(alpha, f, q, valid)


def _taylor(p: Polynomial, x0: float) -> tuple:
    out, d = [], p
    for k in range(5):
        out.append(float(d(x0)) / float(np.prod(np.arange(1, k + 1))))
        d = d.deriv()
    return tuple(out)


def _argmax(p: Polynomial, lo: float, hi: float) -> float:
    dp, ddp = p.deriv(), p.deriv(2)
    cands = [lo, hi]
    for r in dp.roots():
        if abs(r.imag) < 1e-9 and lo <= r.real <= hi:
            x = r.real
            for _ in range(3):  # Newton polish of the stationary point
                d2 = ddp(x)
                if d2 == 0:
                    break
                x -= dp(x) / d2
            if lo <= x <= hi:
                cands.append(x)
    return max(cands, key=lambda x: p(x))


def _root_outward(p: Polynomial, x0: float, direction: int, reach: float, step: float):
    """Nearest zero of p from x0 in the given direction, or None within reach."""
    a = x0
    n = int(np.ceil(reach / step))
    for k in range(1, n + 1):
        b = x0 + direction * min(k * step, reach)
        if p(b) <= 0:
            lo, hi = (a, b) if a < b else (b, a)
            if p(b) == 0:
                return b
            return bisect(p, lo, hi, xtol=1e-10, maxiter=200)
        a = b
    return None


def fit_spectrum(spec: SingularitySpectrum, kind: str = "quartic", center: str = "peak") -> ComplexityParams:
    """Fit a quadratic or quartic to the valid spectrum points and derive alpha0, W and r.

    alpha0 is the argmax of the fitted polynomial over the data range
    (``center="peak"``), or the alpha of the q = 0 point (``center="q0"``),
    in which case the linear coefficient B measures the offset of the fitted
    peak. W spans the fitted polynomial's two zeros nearest alpha0, searched
    outward up to twice the data width (at least 0.5); r = (alpha_max - alpha0)/(alpha0 - alpha_min).

    Raises WidthUndefinedError (carrying a partial result) when no bracketing
    zero pair exists.
    """
    if kind not in ("quadratic", "quartic"):
        raise ConfigError(f"kind must be 'quadratic' or 'quartic', got {kind!r}")
    deg = 2 if kind == "quadratic" else 4
    need = 5 if deg == 2 else 7
    a = spec.alpha[spec.valid]
    f = spec.f[spec.valid]
    if a.size < need:
        raise InsufficientDataError(f"{kind} fit needs {need} valid spectrum points, have {a.size}")
    lo, hi = float(a.min()), float(a.max())
    width_data = hi - lo
    if width_data <= 1e-9 * max(1.0, abs(lo)):
        # monofractal: every point sits at the same alpha
        a0 = float(a.mean())
        coef = (float(f.max()), 0.0, 0.0, 0.0, 0.0)
        return ComplexityParams(a0, 0.0, float("nan"), 0.0, 0.0, coef, kind, a0, a0, int(a.size))
    p = Polynomial.fit(a, f, deg).convert()
    if center == "peak":
        a0 = _argmax(p, lo, hi)
    elif center == "q0":
        at0 = np.flatnonzero((spec.source_q == 0) & spec.valid)
        if at0.size == 0:
            raise ConfigError("center='q0' requires a valid q = 0 point")
        a0 = float(spec.alpha[at0[0]])
    else:
        raise ConfigError(f"center must be 'peak' or 'q0', got {center!r}")
    a0 = float(a0)
    coef = _taylor(p, a0)
    if deg == 2:
        coef = coef[:3] + (0.0, 0.0)
    partial = ComplexityParams(a0, float("nan"), float("nan"), coef[1], coef[3], coef, kind,
                               n_points=int(a.size))
    if not p(a0) > 0:
        raise WidthUndefinedError(f"fitted spectrum is not positive at alpha0 = {a0:.6g}", partial)
    reach = max(2.0 * width_data, MIN_ROOT_REACH)
    step = width_data / 200.0
    left = _root_outward(p, a0, -1, reach, step)
    right = _root_outward(p, a0, +1, reach, step)
    if left is None or right is None:
        raise WidthUndefinedError(
            f"no zero of the fitted spectrum within [{a0 - reach:.6g}, {a0 + reach:.6g}] "
            f"on the {'left' if left is None else 'right'} of alpha0", partial)
    W = right - left
    r = (right - a0) / (a0 - left)
    return ComplexityParams(a0, float(W), float(r), coef[1], coef[3], coef, kind,
                            float(left), float(right), int(a.size))


@dataclass(frozen=True, eq=False)
class MultifractalityAttribution:
    q_values: np.ndarray
    delta_h: np.ndarray
    mean_abs_delta_h: float
    delta_W: float
    delta_alpha0: float
    attribution: str  # "correlation-dominated" | "fat-tail-dominated" | "mixed"


def compare_surrogate(original, shuffled) -> MultifractalityAttribution:
    """Compare a series' spectra with those of its shuffled surrogate.

    Each argument is a ``(ComplexityParams or None, HurstSpectrum)`` pair.
    Shuffling keeps the value distribution but destroys temporal order, so
    a large mean |h_orig(q) - h_shuf(q)| (> 0.1) points at correlations and a
    small one (< 0.03) at the distribution.
    """
    cp_o, hs_o = original
    cp_s, hs_s = shuffled
    if hs_o.q_values.shape != hs_s.q_values.shape or not np.allclose(hs_o.q_values, hs_s.q_values):
        raise ConfigError("incompatible inputs: q grids differ")
    if tuple(hs_o.fit_range) != tuple(hs_s.fit_range):
        raise ConfigError("incompatible inputs: fit ranges differ")
    dh = hs_o.h - hs_s.h
    mad = float(np.mean(np.abs(dh)))
    if cp_o is not None and cp_s is not None:
        dW, da0 = cp_o.W - cp_s.W, cp_o.alpha0 - cp_s.alpha0
    else:
        dW = da0 = float("nan")
    if mad > CORRELATION_DOMINATED:
        verdict = "correlation-dominated"
    elif mad < FAT_TAIL_DOMINATED:
        verdict = "fat-tail-dominated"
    else:
        verdict = "mixed"
    return MultifractalityAttribution(hs_o.q_values, dh, mad, float(dW), float(da0), verdict)
