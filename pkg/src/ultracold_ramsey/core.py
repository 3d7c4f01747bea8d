"""Dimensionless parameters, dressed-state eigensystem and channel wavenumbers.

Everything is expressed in units with hbar = m = 1, so the kinetic energy of
the incident ground-state atom is ``k**2 / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised for physically invalid scattering parameters."""


@dataclass(frozen=True)
class PhysicalParams:
    """One scattering problem: incident wavenumber, Rabi frequency, detuning,
    barrier width ``l`` and gap ``L`` between the two fields."""

    k: float
    omega: float
    delta: float
    l: float
    L: float

    def __post_init__(self):
        for name in ("k", "omega", "delta", "l", "L"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.k <= 0:
            raise ParameterError(f"k must be positive, got {self.k}")
        if self.omega < 0:
            raise ParameterError(f"omega must be non-negative, got {self.omega}")
        if self.l <= 0:
            raise ParameterError(f"l must be positive, got {self.l}")
        if self.L < 0:
            raise ParameterError(f"L must be non-negative, got {self.L}")

    def replace(self, **changes) -> "PhysicalParams":
        return PhysicalParams(**{**self.__dict__, **changes})

    @property
    def energy(self) -> float:
        return 0.5 * self.k**2

    @property
    def delta_cr(self) -> float:
        return critical_detuning(self.k)

    @property
    def total_length(self) -> float:
        return 2 * self.l + self.L


@dataclass(frozen=True)
class ChannelKinematics:
    omega_eff: float
    lambda_plus: float
    lambda_minus: float
    k: float
    q: complex
    k_plus: complex
    k_minus: complex
    delta_cr: float

    @property
    def propagating(self) -> bool:
        """True when the excited channel carries outgoing flux."""
        return self.q.imag == 0 and self.q.real > 0


def effective_rabi(omega: float, delta: float) -> float:
    return math.hypot(omega, delta)


def dressed_eigenvalues(omega: float, delta: float) -> tuple[float, float]:
    """Eigenvalues of the internal coupling matrix ``[[0, omega/2], [omega/2, -delta]]``.

    The larger-magnitude root is computed first and the other one from the
    product ``lambda_plus * lambda_minus = -omega**2 / 4``, which avoids the
    cancellation in ``(-delta + omega_eff) / 2`` when ``delta >> omega``.
    """
    if omega < 0:
        raise ParameterError(f"omega must be non-negative, got {omega}")
    omega_eff = effective_rabi(omega, delta)
    if omega_eff == 0.0:
        return 0.0, 0.0
    if delta >= 0:
        lam_minus = -0.5 * (delta + omega_eff)
        return -0.25 * omega**2 / lam_minus, lam_minus
    lam_plus = 0.5 * (omega_eff - delta)
    return lam_plus, -0.25 * omega**2 / lam_plus


def dressed_mixing_angle(omega: float, delta: float) -> float:
    """Angle ``theta`` with ``|lambda_+> ~ cos(theta)|1> + sin(theta)|2>``.

    ``tan(theta) = 2 lambda_+ / omega``; the normalized form stays well
    conditioned when ``omega << |delta|``.
    """
    return 0.5 * math.atan2(omega, delta)


def branch_sqrt(z2: float) -> complex:
    """Square root on {positive real} U {positive imaginary}.

    With this branch ``exp(1j * w * x)`` decays for ``x -> +inf`` whenever
    the wavenumber ``w`` is evanescent.
    """
    if z2 >= 0:
        return complex(math.sqrt(z2), 0.0)
    return complex(0.0, math.sqrt(-z2))


def critical_detuning(k: float) -> float:
    return -0.5 * k * k


def channel_kinematics(params: PhysicalParams) -> ChannelKinematics:
    k, omega, delta = params.k, params.omega, params.delta
    lam_plus, lam_minus = dressed_eigenvalues(omega, delta)
    return ChannelKinematics(
        omega_eff=effective_rabi(omega, delta),
        lambda_plus=lam_plus,
        lambda_minus=lam_minus,
        k=k,
        q=branch_sqrt(k * k + 2 * delta),
        k_plus=branch_sqrt(k * k - 2 * lam_plus),
        k_minus=branch_sqrt(k * k - 2 * lam_minus),
        delta_cr=critical_detuning(k),
    )
