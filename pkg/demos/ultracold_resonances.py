"""
Ultracold atoms: resonances between the fields
==============================================

For kinetic energies far below the Rabi energy both fields act as nearly
perfect mirrors, and transmission into the excited state happens through
Fabry-Perot resonances of the excited channel inside the gap.  The peaks
sit close to

    delta_n = ((n pi / L)**2 - k**2) / 2.
"""
import math

import numpy as np

from ultracold_ramsey import PhysicalParams
from ultracold_ramsey.approx import resonance_estimates
from ultracold_ramsey.sweep import SweepConfig, compare_methods, find_peaks, run_sweep

# %%
params = PhysicalParams(k=0.1, omega=15 * math.pi, delta=0.0, l=1.2, L=25.0)
print("kinetic / Rabi energy:", params.energy / params.omega)

# %%
# Resonance estimates from the gap length alone
for est in resonance_estimates(params.k, params.L, 5):
    print(f"n={est.n}  delta_n={est.delta_n:.5f}")

# %%
# Exact solution and the low-energy approximation on a dense grid.
# Adaptive refinement adds points where the curve jumps.
config = SweepConfig(params, range=(params.delta_cr, 0.2), n_points=1500,
                     methods=("exact", "ultracold"), adaptive=True, refine_depth=6)
result = run_sweep(config)
print(len(result.rows), "points after refinement")
print(compare_methods(result, "exact", "ultracold").format())
print("max P12:", np.nanmax(result.column("exact")))

# %%
# Peaks annotated with the nearest resonance estimate.  The offset column is
# measured in units of the local spacing between estimates.
print(find_peaks(result, "exact", k=params.k, L=params.L).format())
