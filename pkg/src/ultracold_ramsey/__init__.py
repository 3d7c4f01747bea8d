"""Two-level atoms crossing two separated laser fields: exact two-channel
scattering, analytic approximations and an independent slicing oracle."""
from .approx import (
    ResonanceEstimate,
    crossing_times,
    direct_first_order,
    direct_terms,
    p12_composed,
    p12_direct,
    p12_semiclassical,
    p12_series,
    p12_ultracold,
    resonance_estimates,
    t12_composed,
    ultracold_fabry_perot_terms,
    ultracold_series_terms,
)
from .barrier import (
    AlphaMatrix,
    ScatteringSet,
    alpha_closed_form,
    alpha_from_matrices,
    matching_matrix_barrier,
    matching_matrix_free,
    one_channel_amplitudes,
    scattering_from_alpha,
    single_barrier,
)
from .core import (
    ChannelKinematics,
    ParameterError,
    PhysicalParams,
    channel_kinematics,
    critical_detuning,
    dressed_eigenvalues,
    effective_rabi,
)
from .exact import DoubleBarrierAmplitudes, double_barrier_solve, p12_exact
from .oracle import SliceGrid, convergence_report, integrate_sliced
from .sweep import SweepConfig, SweepResult, compare_methods, find_peaks, run_sweep

__version__ = "0.1.0"
