"""
Ramsey fringes for a fast atom
==============================

An atom with kinetic energy a few times the Rabi energy crosses two fields
of width l separated by a free gap L.  The excited-state transmission P12
oscillates with the detuning.  Here we compare the exact two-channel
result with the direct-scattering approximation and with the classical
fringe formula.
"""
import math

import numpy as np

from ultracold_ramsey import PhysicalParams
from ultracold_ramsey.sweep import SweepConfig, compare_methods, find_peaks, run_sweep

# %%
# k = 1, Omega = pi/20, l = 1, L = 25; E_k / Omega is about 3.2
params = PhysicalParams(k=1.0, omega=math.pi / 20, delta=0.0, l=1.0, L=25.0)
print("kinetic / Rabi energy:", params.energy / params.omega)
print("critical detuning:", params.delta_cr)

# %%
# Sweep from the critical detuning to delta = 3
config = SweepConfig(params, range=(params.delta_cr, 3.0), n_points=3000,
                     methods=("exact", "scl", "direct"))
result = run_sweep(config)
delta = result.axis()

# %%
# The direct-scattering approximation tracks the exact curve closely
print(compare_methods(result, "exact", "direct").format())

# %%
# The classical formula misses the fringes once |delta| approaches E_k
far = np.abs(delta) >= 1.0
print(compare_methods(result, "exact", "scl", mask=far).format())
print(compare_methods(result, "exact", "direct", mask=far).format())

# %%
# Fringe maxima get narrower towards the threshold
print(find_peaks(result, "exact").format())

# %%
# A coarse text rendering of the exact curve near threshold
near = delta < 0.5
x, y = delta[near][::40], result.column("exact")[near][::40]
for d, p in zip(x, y):
    print(f"{d:+.3f} {'#' * int(400 * p)}")
