"""A binomial multiplicative cascade has a known, strongly q-dependent h(q).

The deterministic cascade is log-periodic in scale, so the fit uses
dyadic scales. The partition-function estimate of tau(q) gives an
independent check, and the singularity spectrum peaks at f = 1.
"""
import numpy as np

from mfseries import mfdfa, synth
from mfseries.spectrum import fit_spectrum, legendre_transform

a, n = 0.6, 2**14
measure = synth.binomial_cascade(n, a)
grid = mfdfa.GridSpec(mfdfa.q_grid(-5, 5, 0.5), 2 ** np.arange(3, 13), 2)
_, hs = mfdfa.mfdfa(measure, grid, (8, 4096))
pt = mfdfa.partition_tau(measure, grid.scales, grid.q_values)

print("   q   h(MF-DFA)  h(exact)  tau(MF-DFA)  tau(boxes)")
for q in (-5, -3, -1, 1, 3, 5):
    i = int(np.flatnonzero(grid.q_values == q)[0])
    print(f"{q:+4d}   {hs.h[i]:.4f}    {synth.cascade_hurst(q, a):.4f}    "
          f"{hs.tau[i]:+.4f}     {pt.tau[i]:+.4f}")

spec = legendre_transform(hs)
cp = fit_spectrum(spec, "quartic")
print(f"\nmax f = {spec.f.max():.4f}")
print(f"alpha0 = {cp.alpha0:.4f} (closed form {synth.cascade_alpha0(a):.4f}), W = {cp.W:.3f}, r = {cp.r:.3f}")
