"""Analytic transmission formulas: semiclassical Ramsey fringes, the double
barrier amplitude composed from single-barrier data, and the multiple
scattering approximations for fast and ultracold atoms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barrier import ScatteringSet, single_barrier
from .core import PhysicalParams, channel_kinematics, effective_rabi


class VanishingDenominatorError(ZeroDivisionError):
    pass


def p12_semiclassical(params: PhysicalParams, second_phase: str = "l") -> float:
    """Ramsey fringe formula for classical centre-of-mass motion.

    ``second_phase`` selects the length in the ``sin(delta * x / 2k)`` factor
    of the second bracket term: ``"l"`` (the form usually quoted for this
    geometry) or ``"L"`` (the free-flight phase of the textbook formula).
    """
    if second_phase not in ("l", "L"):
        raise ValueError("second_phase must be 'l' or 'L'")
    k, omega, delta, l, L = params.k, params.omega, params.delta, params.l, params.L
    omega_eff = effective_rabi(omega, delta)
    if omega_eff == 0:
        return 0.0
    pulse = omega_eff * l / (2 * k)
    length = l if second_phase == "l" else L
    bracket = math.cos(delta * L / (2 * k)) * math.cos(pulse) - (
        delta / omega_eff
    ) * math.sin(delta * length / (2 * k)) * math.sin(pulse)
    return 4 * omega**2 / omega_eff**2 * math.sin(pulse) ** 2 * bracket**2


def _pair(first: ScatteringSet, second: ScatteringSet):
    # t: left transmission of the first field, rr: its right reflection,
    # tt / rt: left transmission / reflection of the second field
    return first.t_l, first.r_r, second.t_l, second.r_l


def t12_composed(first: ScatteringSet, second: ScatteringSet) -> complex:
    """Double-barrier ``T12`` from the single-barrier amplitudes of both fields.

    Exact (no truncation); agrees with :func:`exact.double_barrier_solve`.
    """
    t, rr, tt, rt = _pair(first, second)
    t11, t12 = t[0, 0], t[0, 1]
    num = (
        t12 * tt[1, 1]
        + t11 * tt[0, 1]
        - (rr[0, 1] * t11 - rr[0, 0] * t12) * (rt[1, 0] * tt[0, 1] - rt[0, 0] * tt[1, 1])
        - (rr[1, 1] * t11 - rr[1, 0] * t12) * (rt[1, 1] * tt[0, 1] - rt[0, 1] * tt[1, 1])
    )
    den = (
        1
        - rr[0, 1] * rt[1, 0]
        - rr[1, 1] * rt[1, 1]
        - rr[0, 0] * rt[0, 0]
        - rr[1, 0] * rt[0, 1]
        - (rr[0, 1] * rr[1, 0] - rr[1, 1] * rr[0, 0])
        * (rt[0, 0] * rt[1, 1] - rt[1, 0] * rt[0, 1])
    )
    if den == 0:
        raise VanishingDenominatorError("multiple-scattering denominator vanishes")
    return complex(num / den)


def direct_terms(first: ScatteringSet, second: ScatteringSet) -> complex:
    """The two paths crossing both fields without reflection."""
    t, _, tt, _ = _pair(first, second)
    return complex(t[0, 0] * tt[0, 1] + t[0, 1] * tt[1, 1])


def direct_first_order(first: ScatteringSet, second: ScatteringSet) -> complex:
    """Direct paths plus every path with one reflection off each field."""
    t, rr, tt, rt = _pair(first, second)
    t11, t12 = t[0, 0], t[0, 1]
    once = (
        t12 * (rt[1, 0] * rr[0, 0] + rt[1, 1] * rr[1, 0]) * tt[0, 1]
        + t11 * (rt[0, 0] * rr[0, 1] + rt[0, 1] * rr[1, 1]) * tt[1, 1]
        + t12 * (rt[1, 0] * rr[0, 1] + rt[1, 1] * rr[1, 1]) * tt[1, 1]
        + t11 * (rt[0, 0] * rr[0, 0] + rt[0, 1] * rr[1, 0]) * tt[0, 1]
    )
    return direct_terms(first, second) + complex(once)


def ultracold_series_terms(first: ScatteringSet, second: ScatteringSet) -> list[complex]:
    """Leading terms of ``T12`` when only same-channel reflections are large.

    Returns ``[excited-first, excited-second, one conversion (ground start),
    one conversion (excited start)]``; the first two are quadratic in the
    small amplitudes, the last two cubic.  Each term resums the Fabry-Perot
    bounces in the gap.
    """
    t, rr, tt, rt = _pair(first, second)
    t11, t12 = t[0, 0], t[0, 1]
    fp1 = 1 - rr[0, 0] * rt[0, 0]
    fp2 = 1 - rr[1, 1] * rt[1, 1]
    if fp1 == 0 or fp2 == 0:
        raise VanishingDenominatorError("Fabry-Perot denominator vanishes")
    return [
        complex(t12 * tt[1, 1] / fp2),
        complex(t11 * tt[0, 1] / fp1),
        complex(t11 * tt[1, 1] * (rr[0, 1] * rt[0, 0] + rr[1, 1] * rt[0, 1]) / (fp1 * fp2)),
        complex(t12 * tt[0, 1] * (rr[0, 0] * rt[1, 0] + rr[1, 0] * rt[1, 1]) / (fp1 * fp2)),
    ]


def _fields(params: PhysicalParams):
    return single_barrier(params, 0.0), single_barrier(params, params.l + params.L)


def _below_cutoff(params: PhysicalParams) -> bool:
    return params.delta <= params.delta_cr or params.omega == 0


def p12_composed(params: PhysicalParams) -> float:
    if _below_cutoff(params):
        return 0.0
    q = channel_kinematics(params).q.real
    return q / params.k * abs(t12_composed(*_fields(params))) ** 2


def p12_series(params: PhysicalParams) -> float:
    """Probability from :func:`direct_first_order`."""
    if _below_cutoff(params):
        return 0.0
    q = channel_kinematics(params).q.real
    return q / params.k * abs(direct_first_order(*_fields(params))) ** 2


def p12_direct(params: PhysicalParams) -> float:
    """Two-path interference for fast atoms, using only the first field's
    amplitudes and the gap phase ``exp(i(k - q)(l + L))``."""
    if _below_cutoff(params):
        return 0.0
    k = params.k
    q = channel_kinematics(params).q.real
    s = single_barrier(params)
    phase = np.exp(1j * (k - q) * (params.l + params.L))
    return q / k * abs(s.t_l[0, 1]) ** 2 * abs(s.t_l[1, 1] + s.t_l[0, 0] * phase) ** 2


def ultracold_fabry_perot_terms(params: PhysicalParams) -> tuple[complex, complex]:
    """The excited-in-first-field and excited-in-second-field amplitudes of the
    ultracold approximation, before taking ``(q/k)|sum|^2``."""
    kin = channel_kinematics(params)
    k, q, l, L = params.k, kin.q, params.l, params.L
    s = single_barrier(params)
    t11, t12, t22 = s.t_l[0, 0], s.t_l[0, 1], s.t_l[1, 1]
    r11, r22 = s.r_l[0, 0], s.r_l[1, 1]
    den2 = 1 - r22**2 * np.exp(2j * q * L)
    den1 = 1 - r11**2 * np.exp(2j * k * L)
    if den1 == 0 or den2 == 0:
        raise VanishingDenominatorError(f"Fabry-Perot denominator vanishes for {params}")
    return (
        complex(t12 * t22 / den2),
        complex(t11 * t12 * np.exp(1j * (k - q) * (l + L)) / den1),
    )


def p12_ultracold(params: PhysicalParams) -> float:
    """Coherent sum of the two Fabry-Perot families for slow atoms."""
    if _below_cutoff(params):
        return 0.0
    q = channel_kinematics(params).q.real
    a, b = ultracold_fabry_perot_terms(params)
    return q / params.k * abs(a + b) ** 2


@dataclass(frozen=True)
class ResonanceEstimate:
    n: int
    delta_n: float


def resonance_estimates(k: float, L: float, n_max: int) -> list[ResonanceEstimate]:
    """Detunings where the excited wave fits ``n`` half wavelengths in the gap."""
    if k <= 0 or L <= 0 or n_max < 1:
        raise ValueError("need k > 0, L > 0 and n_max >= 1")
    out = []
    for n in range(1, n_max + 1):
        kn = n * math.pi / L
        if math.isclose(k, kn, rel_tol=1e-12):
            continue
        out.append(ResonanceEstimate(n, 0.5 * (kn * kn - k * k)))
    return out


def crossing_times(params: PhysicalParams) -> tuple[float, float]:
    """``(L/k, L/q)``: gap crossing time of a ground-state and an excited atom."""
    kin = channel_kinematics(params)
    if not kin.propagating:
        raise ValueError(f"excited channel is not propagating at delta={params.delta}")
    return params.L / params.k, params.L / kin.q.real
