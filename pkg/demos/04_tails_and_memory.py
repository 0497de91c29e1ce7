"""Tail exponent of heavy-tailed returns and the ACF of a short-memory process."""
import numpy as np

from mfseries import synth
from mfseries.correlation import autocorrelation, classify_decay, tail_exponent

x = synth.pareto(100_000, zeta=3.0, seed=7)
for frac in (0.01, 0.05, 0.1):
    t = tail_exponent(x, tail_fraction=frac)
    print(f"top {frac:>4.0%} of |r|: zeta = {t.zeta:.3f} +/- {t.stderr:.3f} from {t.n_tail} points")

phi = 0.5
y = synth.ar1(100_000, phi, seed=7)
acf = autocorrelation(y, 10)
print("\n  s   C(s)    phi^s")
for s, c in zip(acf.lags[:6], acf.values[:6]):
    print(f"{s:3d}  {c:+.4f}  {phi**s:.4f}")
cls = classify_decay(acf, (1, 5))
print(f"decay: {cls.law}, s0 = {cls.s0:.3f} (exact {-1 / np.log(phi):.3f})")
