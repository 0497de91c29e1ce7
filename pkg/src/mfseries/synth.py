"""Seeded generators of synthetic series with known scaling properties.

All randomness comes from numpy's PCG64 bit generator seeded through a
``SeedSequence``; independent streams (e.g. the real and imaginary parts of
the circulant-embedding noise) are obtained with ``SeedSequence.spawn`` so
output is byte-identical for a fixed seed regardless of call order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .series import TimeSeries

__all__ = [
    "GeneratorSpec",
    "generate",
    "gaussian_white",
    "ar1",
    "fgn",
    "fgn_autocovariance",
    "binomial_cascade",
    "cascade_hurst",
    "cascade_tau",
    "cascade_alpha0",
    "pareto",
]

KINDS = ("gaussian_white", "ar1", "fgn", "binomial_cascade", "pareto")


def _streams(seed: int, n: int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(n)]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def gaussian_white(n: int, seed: int = 0) -> np.ndarray:
    (rng,) = _streams(seed, 1)
    return rng.standard_normal(n)


def ar1(n: int, phi: float, seed: int = 0) -> np.ndarray:
    """x_{t+1} = phi * x_t + eps_t, started from the stationary law N(0, 1/(1-phi^2))."""
    from scipy.signal import lfilter

    if not -1 < phi < 1:
        raise ConfigError(f"AR(1) coefficient must lie in (-1, 1), got {phi}")
    rng_init, rng_eps = _streams(seed, 2)
    x0 = rng_init.standard_normal() / np.sqrt(1.0 - phi * phi)
    eps = rng_eps.standard_normal(n)
    eps[0] = x0
    return lfilter([1.0], [1.0, -phi], eps)


def fgn_autocovariance(k, hurst: float) -> np.ndarray:
    """Unit-variance fGn autocovariance 0.5(|k+1|^2H - 2|k|^2H + |k-1|^2H)."""
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2 * k**h2 + np.abs(k - 1) ** h2)


def fgn(n: int, hurst: float, seed: int = 0) -> np.ndarray:
    """Exact fractional Gaussian noise by circulant embedding (Davies-Harte).

    The covariance is embedded in a circulant of size 2n whose eigenvalues
    are non-negative for every H in (0, 1); the real part of the
    eigen-weighted complex Gaussian FFT then has exactly the fGn covariance.
    """
    if not 0 < hurst < 1:
        raise ConfigError(f"Hurst exponent must lie in (0, 1), got {hurst}")
    if not _is_pow2(n):
        raise ConfigError(f"fgn length must be a power of two, got {n}")
    m = 2 * n
    gam = fgn_autocovariance(np.arange(n + 1), hurst)
    row = np.concatenate([gam, gam[-2:0:-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -1e-10 * lam.max():
        raise ConfigError(f"circulant embedding not non-negative definite for H={hurst}, n={n}")
    lam = np.clip(lam, 0.0, None)
    re, im = _streams(seed, 2)
    xi = re.standard_normal(m) + 1j * im.standard_normal(m)
    y = np.fft.fft(np.sqrt(lam) * xi) / np.sqrt(m)
    return y.real[:n].copy()


def binomial_cascade(n: int, a: float, seed: int = 0, randomize: bool = False) -> np.ndarray:
    """Dyadic multiplicative cascade of total mass 1 on n = 2^k cells.

    At each level every cell splits its mass into fractions a and 1-a. By
    default the a-branch is always the left child, which gives the classic
    deterministic construction x_j = a^(k - n1(j)) (1-a)^n1(j) with n1 the
    number of set bits of j. ``randomize=True`` picks the a-branch side at
    each node with a fair seeded coin; the multiset of box masses at every
    dyadic scale, and hence every partition sum, is unchanged.
    """
    if not 0 < a < 1:
        raise ConfigError(f"cascade multiplier must lie in (0, 1), got {a}")
    if not _is_pow2(n):
        raise ConfigError(f"cascade length must be a power of two, got {n}")
    b = 1.0 - a
    (rng,) = _streams(seed, 1)
    mass = np.ones(1)
    while mass.size < n:
        left = np.full(mass.size, a)
        if randomize:
            flip = rng.random(mass.size) < 0.5
            left[flip] = b
        child = np.empty(2 * mass.size)
        child[0::2] = mass * left
        child[1::2] = mass * (1.0 - left)
        mass = child
    return mass


def cascade_tau(q, a: float) -> np.ndarray:
    """Mass exponent of the binomial cascade, -ln(a^q + (1-a)^q) / ln 2."""
    q = np.asarray(q, dtype=float)
    return -np.log(a**q + (1 - a) ** q) / np.log(2.0)


def cascade_hurst(q, a: float) -> np.ndarray:
    """Generalized Hurst exponent 1/q - ln(a^q + (1-a)^q)/(q ln 2); q = 0 by its limit."""
    q = np.asarray(q, dtype=float)
    b = 1 - a
    with np.errstate(divide="ignore", invalid="ignore"):
        h = (1 + cascade_tau(q, a)) / q
    # tau(q) + 1 ~ -q (ln a + ln b) / (2 ln 2) near q = 0
    limit = -(np.log(a) + np.log(b)) / (2 * np.log(2.0))
    return np.where(q == 0, limit, h)


def cascade_alpha0(a: float) -> float:
    """Hoelder exponent at the spectrum maximum (q = 0): -(ln a + ln b) / (2 ln 2).

    Not to be confused with -(a ln a + b ln b)/ln 2, which is alpha at q = 1
    where f(alpha) = alpha.
    """
    b = 1 - a
    return float(-(np.log(a) + np.log(b)) / (2 * np.log(2.0)))


def pareto(n: int, zeta: float, seed: int = 0, symmetric: bool = True) -> np.ndarray:
    """Pareto samples with P(|X| > x) = x^-zeta for x >= 1, by inverse CDF.

    With ``symmetric`` (the default) each draw gets an independent fair sign,
    mimicking two-sided returns so that centering does not bend the tail.
    """
    if not zeta > 1:
        raise ConfigError(f"tail exponent must exceed 1, got {zeta}")
    u_rng, s_rng = _streams(seed, 2)
    u = 1.0 - u_rng.random(n)  # (0, 1]
    x = u ** (-1.0 / zeta)
    if symmetric:
        x *= np.where(s_rng.random(n) < 0.5, -1.0, 1.0)
    return x


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate. ``params`` holds ``phi``, ``hurst``, ``a`` or ``zeta``."""

    kind: str
    length: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if int(self.length) != self.length or self.length < 1:
            raise ConfigError(f"length must be a positive integer, got {self.length!r}")
        required = {"ar1": "phi", "fgn": "hurst", "binomial_cascade": "a", "pareto": "zeta"}
        key = required.get(self.kind)
        if key and key not in self.params:
            raise ConfigError(f"{self.kind} requires parameter {key!r}")


def generate(spec: GeneratorSpec) -> TimeSeries:
    p = spec.params
    n = int(spec.length)
    if spec.kind == "gaussian_white":
        x = gaussian_white(n, spec.seed)
        label = f"gaussian_white(seed={spec.seed})"
    elif spec.kind == "ar1":
        x = ar1(n, float(p["phi"]), spec.seed)
        label = f"ar1(phi={p['phi']}, seed={spec.seed})"
    elif spec.kind == "fgn":
        x = fgn(n, float(p["hurst"]), spec.seed)
        label = f"fgn(H={p['hurst']}, seed={spec.seed})"
    elif spec.kind == "binomial_cascade":
        x = binomial_cascade(n, float(p["a"]), spec.seed, bool(p.get("randomize", False)))
        label = f"binomial_cascade(a={p['a']})"
    else:
        x = pareto(n, float(p["zeta"]), spec.seed, bool(p.get("symmetric", True)))
        label = f"pareto(zeta={p['zeta']}, seed={spec.seed})"
    return TimeSeries(x, None, label)
