"""Exact double-barrier scattering for a ground-state atom incident from the left."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barrier import (
    SingularMatchingError,
    _interface_blocks,
    alpha_from_matrices,
    wave_matrix,
)
from .core import PhysicalParams, channel_kinematics

RESIDUAL_LIMIT = 1e-6


@dataclass(frozen=True)
class DoubleBarrierAmplitudes:
    """Asymptotic amplitudes: ``T11 e^{ikx}|1> + T12 e^{iqx}|2>`` on the right,
    ``R11 e^{-ikx}|1> + R12 e^{-iqx}|2>`` reflected on the left."""

    T11: complex
    T12: complex
    R11: complex
    R12: complex
    k: float
    q: complex
    residual: float = 0.0

    @property
    def flux_residual(self) -> float:
        k, q = self.k, self.q
        out = k * (abs(self.T11) ** 2 + abs(self.R11) ** 2)
        if q.imag == 0 and q.real > 0:
            out += q.real * (abs(self.T12) ** 2 + abs(self.R12) ** 2)
        return abs(out - k) / k

    def p12(self) -> float:
        if not (self.q.imag == 0 and self.q.real > 0):
            return 0.0
        return self.q.real / self.k * abs(self.T12) ** 2


def _gap_matrix(x, kin, start, stop):
    return wave_matrix(x, (kin.k, kin.q), ((1.0, 0.0), (0.0, 1.0)), start, stop)


def _assemble(params, kin):
    l, L = params.l, params.L
    lf1, lb1, rb1, rf1 = _interface_blocks(params, kin, 0.0)
    lf3, lb3, rb3, rf3 = _interface_blocks(params, kin, l + L)
    g_left = _gap_matrix(l, kin, l, l + L)
    g_right = _gap_matrix(l + L, kin, l, l + L)

    # unknowns: R11, R12 | c1 (4) | gap (4) | c3 (4) | T11, T12
    A = np.zeros((16, 16), dtype=complex)
    b = np.zeros(16, dtype=complex)
    A[0:4, 0] = lf1[:, 1]
    A[0:4, 1] = lf1[:, 3]
    A[0:4, 2:6] = -lb1
    b[0:4] = -lf1[:, 0]
    A[4:8, 2:6] = rb1
    A[4:8, 6:10] = -g_left
    A[8:12, 6:10] = g_right
    A[8:12, 10:14] = -lb3
    A[12:16, 10:14] = rb3
    A[12:16, 14] = -rf3[:, 0]
    A[12:16, 15] = -rf3[:, 2]
    # rf1 and lf3 drop out: the gap is written directly in free waves
    return A, b


def transfer_residual(params: PhysicalParams, amps: DoubleBarrierAmplitudes) -> float:
    """Relative residual of ``v0 = alpha alpha~ v4`` with the solved amplitudes."""
    product = (
        alpha_from_matrices(0.0, params).entries
        @ alpha_from_matrices(params.l + params.L, params).entries
    )
    v0 = np.array([1.0, amps.R11, 0.0, amps.R12])
    v4 = np.array([amps.T11, 0.0, amps.T12, 0.0])
    scale = np.linalg.norm(product, 2) * np.linalg.norm(v4) + np.linalg.norm(v0)
    return float(np.linalg.norm(v0 - product @ v4) / scale)


def double_barrier_solve(params: PhysicalParams, check_transfer: bool = True) -> DoubleBarrierAmplitudes:
    """Solve ``(1, R11, 0, R12) = alpha alpha~ (T11, 0, T12, 0)``.

    The composed relation is imposed through its four interface conditions
    at once (a 16x16 system), which keeps the solve well conditioned when the
    dressed waves are evanescent.  With ``check_transfer`` the residual of the
    composed 4x4 relation is reported as well.
    """
    kin = channel_kinematics(params)
    if params.omega == 0:
        return DoubleBarrierAmplitudes(1.0 + 0j, 0j, 0j, 0j, kin.k, kin.q)
    if kin.q == 0:
        raise SingularMatchingError(f"excited wavenumber vanishes at the critical detuning ({params})")
    A, b = _assemble(params, kin)
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatchingError(
            f"singular double-barrier system for {params} (cond ~ {np.linalg.cond(A):.3g})"
        ) from exc
    residual = float(
        np.linalg.norm(A @ x - b) / (np.linalg.norm(A, 2) * np.linalg.norm(x) + np.linalg.norm(b))
    )
    amps = DoubleBarrierAmplitudes(
        T11=complex(x[14]), T12=complex(x[15]), R11=complex(x[0]), R12=complex(x[1]),
        k=kin.k, q=kin.q, residual=residual,
    )
    if check_transfer and kin.propagating:
        with np.errstate(all="ignore"):
            tr = transfer_residual(params, amps)
        if np.isfinite(tr):
            residual = max(residual, tr)
            amps = DoubleBarrierAmplitudes(**{**amps.__dict__, "residual": residual})
    if not residual <= RESIDUAL_LIMIT:
        raise SingularMatchingError(
            f"double-barrier residual {residual:.3g} exceeds {RESIDUAL_LIMIT} for {params}"
        )
    return amps


def p12_exact(params: PhysicalParams) -> float:
    """Excited-state transmission probability ``(q/k)|T12|^2``; zero at and below
    the critical detuning."""
    if params.delta <= params.delta_cr or params.omega == 0:
        return 0.0
    return double_barrier_solve(params, check_transfer=False).p12()
