"""
Checking the exact solver with an independent integrator
========================================================

The oracle cuts space into slices of constant potential, diagonalises the
local two-level Hamiltonian in each slice and chains interface scattering
matrices.  It shares nothing with the exact solver beyond the parameter
types, so agreement between the two is a meaningful check.
"""
import math

from ultracold_ramsey import PhysicalParams
from ultracold_ramsey.core import channel_kinematics
from ultracold_ramsey.exact import double_barrier_solve
from ultracold_ramsey.oracle import SliceGrid, amplitude_difference, convergence_report, integrate_sliced

# %%
# A stiff case: in the ultracold regime the upper dressed wave decays by
# roughly exp(8) across each field
params = PhysicalParams(k=0.1, omega=15 * math.pi, delta=0.0266, l=1.2, L=25.0)
kin = channel_kinematics(params)
print("k_plus =", kin.k_plus, " |k_plus| l =", abs(kin.k_plus) * params.l)

# %%
exact = double_barrier_solve(params)
oracle = integrate_sliced(params, SliceGrid.uniform(params, 8))
print("T12 exact  :", exact.T12)
print("T12 oracle :", oracle.T12)
print("amplitude difference:", amplitude_difference(oracle, exact))

# %%
# Flux conservation of the oracle output, computed from its own amplitudes
print("oracle flux residual:", oracle.flux_residual)

# %%
# The mesa profile is piecewise constant, so any number of slices is exact
for row in convergence_report(params, [1, 4, 16, 64]):
    print(f"{row.n_slices:4d} slices  residual {row.residual:.2e}  flux {row.flux_residual:.2e}")
