"""White noise has one scaling exponent: h(q) stays near 0.5 for every q.

Run: python demos/01_monofractal_baseline.py
"""
import numpy as np

from mfseries import mfdfa, synth

n = 2**14
x = synth.gaussian_white(n, seed=1)
grid = mfdfa.GridSpec.default(n, order=2, q_min=-5, q_max=5)
surface, hs = mfdfa.mfdfa(x, grid, fit_range=(16, 1024))

print(f"{len(grid.scales)} scales from {grid.scales[0]} to {grid.scales[-1]}, {len(grid.q_values)} q values")
for q in (-5, -2, 0, 2, 5):
    print(f"  h({q:+d}) = {hs.h_at(q):.3f} +/- {hs.stderr[hs.q_values == q][0]:.3f}")
print(f"spread of h(q) over q in [-5, 5]: {np.ptp(hs.h):.3f}")
print(f"gamma = {hs.gamma:.3f}, beta = {hs.beta:.3f}  (uncorrelated noise sits at gamma = 1, beta = 0)")
