"""Single laser barrier: matching matrices, the alpha matrix and the 16
single-barrier scattering amplitudes.

Coefficient vectors are ordered ``(A+, B+, A-, B-)``: forward/backward waves
of the ground channel (or the ``+`` dressed state inside a barrier) followed
by those of the excited channel (``-`` dressed state).  Matching-matrix rows
are ``(phi1, phi1', phi2, phi2')`` evaluated at one position.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ChannelKinematics,
    PhysicalParams,
    branch_sqrt,
    channel_kinematics,
    dressed_mixing_angle,
)

_FREE_VECTORS = ((1.0, 0.0), (0.0, 1.0))


class DegenerateBasisError(ValueError):
    """The dressed basis is undefined (zero Rabi frequency)."""


class SingularMatchingError(np.linalg.LinAlgError):
    """A boundary-value system could not be solved reliably."""


def wave_matrix(x, wavenumbers, vectors, fwd_origin=0.0, bwd_origin=0.0):
    """Value/derivative rows of four plane waves at ``x``.

    Mode ``m`` contributes the column pair ``vectors[m] * exp(+i w (x - fwd_origin))``
    and ``vectors[m] * exp(-i w (x - bwd_origin))``.
    """
    cols = []
    for w, (v1, v2) in zip(wavenumbers, vectors):
        w = complex(w)
        fwd = cmath.exp(1j * w * (x - fwd_origin))
        bwd = cmath.exp(-1j * w * (x - bwd_origin))
        dfwd, dbwd = 1j * w * fwd, -1j * w * bwd
        cols.append((v1 * fwd, v1 * dfwd, v2 * fwd, v2 * dfwd))
        cols.append((v1 * bwd, v1 * dbwd, v2 * bwd, v2 * dbwd))
    return np.array(cols, dtype=complex).T


def matching_matrix_free(x: float, kinematics: ChannelKinematics) -> np.ndarray:
    return wave_matrix(x, (kinematics.k, kinematics.q), _FREE_VECTORS)


def matching_matrix_barrier(
    x: float, kinematics: ChannelKinematics, omega: float, origin: float = 0.0
) -> np.ndarray:
    """Matching matrix inside a field region in the unnormalized dressed basis
    ``|lambda_pm> = |1> + (2 lambda_pm / omega)|2>``.

    ``origin`` shifts the phase reference of all four waves; products like
    ``N(a) N(b)^-1`` do not depend on it.
    """
    if omega <= 0:
        raise DegenerateBasisError("dressed basis is undefined for omega = 0")
    vectors = (
        (1.0, 2 * kinematics.lambda_plus / omega),
        (1.0, 2 * kinematics.lambda_minus / omega),
    )
    return wave_matrix(
        x, (kinematics.k_plus, kinematics.k_minus), vectors, origin, origin
    )


def _stable_barrier_matrix(x, kinematics, omega, delta, start, stop):
    # normalized dressed vectors, forward waves referenced at the left edge and
    # backward waves at the right edge: every entry is bounded inside [start, stop]
    theta = dressed_mixing_angle(omega, delta)
    c, s = math.cos(theta), math.sin(theta)
    return wave_matrix(
        x, (kinematics.k_plus, kinematics.k_minus), ((c, s), (-s, c)), start, stop
    )


@dataclass(frozen=True)
class AlphaMatrix:
    """``alpha`` with ``v_left = alpha @ v_right`` across one barrier.

    Besides the 4x4 product, the instance keeps the interface equations it was
    built from.  Amplitude extraction solves those directly, since ``alpha``
    itself grows like ``exp(|k_+| l)`` for evanescent dressed states.
    """

    entries: np.ndarray
    barrier_start: float
    params: PhysicalParams
    kinematics: ChannelKinematics
    interfaces: tuple | None = field(default=None, repr=False)

    def __getitem__(self, ij):
        """1-based access, ``alpha[3, 1]``."""
        i, j = ij
        return self.entries[i - 1, j - 1]


def _interface_blocks(params, kinematics, start):
    stop = start + params.l
    left_free = matching_matrix_free(start, kinematics)
    right_free = matching_matrix_free(stop, kinematics)
    args = (kinematics, params.omega, params.delta, start, stop)
    return (
        left_free,
        _stable_barrier_matrix(start, *args),
        _stable_barrier_matrix(stop, *args),
        right_free,
    )


def alpha_from_matrices(barrier_start: float, params: PhysicalParams) -> AlphaMatrix:
    """``alpha = N0(a)^-1 N(a) N(a+l)^-1 N0(a+l)`` for a barrier on ``[a, a+l]``.

    Inversions are carried out as linear solves.
    """
    kin = channel_kinematics(params)
    if params.omega == 0:
        return AlphaMatrix(np.eye(4, dtype=complex), barrier_start, params, kin)
    a, b = barrier_start, barrier_start + params.l
    n_left = matching_matrix_barrier(a, kin, params.omega, origin=a)
    n_right = matching_matrix_barrier(b, kin, params.omega, origin=a)
    try:
        inner = n_left @ np.linalg.solve(n_right, matching_matrix_free(b, kin))
        entries = np.linalg.solve(matching_matrix_free(a, kin), inner)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(n_right)
        raise SingularMatchingError(
            f"matching matrix inversion failed for {params} (cond ~ {cond:.3g})"
        ) from exc
    return AlphaMatrix(entries, barrier_start, params, kin, _interface_blocks(params, kin, a))


def alpha_closed_form(params: PhysicalParams) -> dict[tuple[int, int], complex]:
    """Closed-form alpha entries of a barrier on ``[0, l]``, keyed 1-based.

    ``alpha_33`` follows from ``alpha_11`` by ``k -> q`` *and* exchanging the
    dressed labels in ``d_pm``; ``alpha_21``/``alpha_43`` carry the
    ``sin(k_pm l)`` factors.  Both forms are checked against
    :func:`alpha_from_matrices`.
    """
    if params.omega <= 0:
        raise DegenerateBasisError("closed forms need omega > 0")
    kin = channel_kinematics(params)
    k, q, l, omega = kin.k, kin.q, params.l, params.omega
    lp, lm, op = kin.lambda_plus, kin.lambda_minus, kin.omega_eff
    kp, km = kin.k_plus, kin.k_minus

    def sigma(kpm, k1, k2):
        return 0.5j * (k1 / kpm + kpm / k2)

    def d(kpm, k1, k2):
        return np.cos(kpm * l) - sigma(kpm, k1, k2) * np.sin(kpm * l)

    def a31(k1, k2):
        return (
            0.25 * omega * np.exp(1j * k1 * l)
            * (d(kp, k1, k2) - d(km, k1, k2) + k1 / k2 * (d(kp, k2, k1) - d(km, k2, k1)))
            / op
        )

    sp, sm = np.sin(kp * l), np.sin(km * l)
    return {
        (1, 1): np.exp(1j * k * l) * (lp * d(km, k, k) - lm * d(kp, k, k)) / op,
        (3, 3): np.exp(1j * q * l) * (lp * d(kp, q, q) - lm * d(km, q, q)) / op,
        (3, 1): a31(k, q),
        (1, 3): a31(q, k),
        (4, 1): a31(k, -q),
        (2, 3): a31(q, -k),
        (2, 1): np.exp(1j * k * l)
        * (lm * sigma(kp, k, -k) * sp - lp * sigma(km, k, -k) * sm) / op,
        (4, 3): np.exp(1j * q * l)
        * (lm * sigma(km, q, -q) * sm - lp * sigma(kp, q, -q) * sp) / op,
    }


@dataclass(frozen=True)
class ScatteringSet:
    """Single-barrier amplitudes as 2x2 arrays indexed ``[incoming, outgoing]``
    (0 = ground, 1 = excited).  ``t_l[0, 1]`` is ``t^l_12``, ground in and excited out."""

    t_l: np.ndarray
    t_r: np.ndarray
    r_l: np.ndarray
    r_r: np.ndarray
    k: float
    q: complex

    def amp(self, name: str) -> complex:
        """Amplitude by label, e.g. ``amp("r_r12")``."""
        arr = getattr(self, name[:3])
        return arr[int(name[3]) - 1, int(name[4]) - 1]

    def s_matrix(self) -> np.ndarray:
        """Flux-normalized S-matrix; ports are (left 1, left 2, right 1, right 2)."""
        w = np.array([self.k, self.q, self.k, self.q], dtype=complex)
        S = np.empty((4, 4), dtype=complex)
        S[:2, :2] = self.r_l.T
        S[2:, :2] = self.t_l.T
        S[:2, 2:] = self.t_r.T
        S[2:, 2:] = self.r_r.T
        return S * np.sqrt(w[:, None] / w[None, :])

    def unitarity_residual(self) -> float:
        S = self.s_matrix()
        return float(np.abs(S.conj().T @ S - np.eye(4)).max())


def _trivial_set(kin):
    eye = np.eye(2, dtype=complex)
    zero = np.zeros((2, 2), dtype=complex)
    return ScatteringSet(eye, eye.copy(), zero, zero.copy(), kin.k, kin.q)


# incoming coefficients: A of the left vector, B of the right vector
_IN_LEFT, _OUT_LEFT = (0, 2), (1, 3)
_IN_RIGHT, _OUT_RIGHT = (1, 3), (0, 2)


def _unpack(sol, kin):
    # sol rows: left B+, left B-, right A+, right A-; columns: the four incidences
    r_l = sol[0:2, 0:2].T
    t_l = sol[2:4, 0:2].T
    t_r = sol[0:2, 2:4].T
    r_r = sol[2:4, 2:4].T
    return ScatteringSet(t_l, t_r, r_l, r_r, kin.k, kin.q)


def _incidence_rhs(G_left, G_right):
    # RHS columns for unit incidence: left ch1, left ch2, right ch1, right ch2
    return -np.column_stack(
        [G_left[:, _IN_LEFT[0]], G_left[:, _IN_LEFT[1]],
         G_right[:, _IN_RIGHT[0]], G_right[:, _IN_RIGHT[1]]]
    )


def scattering_from_alpha(alpha: AlphaMatrix) -> ScatteringSet:
    """All 16 amplitudes from the four unit-incidence boundary-value problems.

    Uses the interface equations stored on ``alpha`` when present (stable for
    strongly evanescent dressed states), otherwise ``v_left = alpha v_right``.
    """
    kin = alpha.kinematics
    if alpha.params.omega == 0:
        return _trivial_set(kin)
    if alpha.interfaces is None:
        return _scattering_from_entries(alpha.entries, kin)
    return _scattering_from_interfaces(alpha.interfaces, kin, alpha.params)


def _scattering_from_interfaces(interfaces, kin, params):
    left_free, left_bar, right_bar, right_free = interfaces
    # unknowns: left outgoing (2), barrier coefficients (4), right outgoing (2)
    zeros = np.zeros((4, 4), dtype=complex)
    G_left = np.vstack([left_free, zeros])
    G_right = np.vstack([zeros, -right_free])
    G_bar = np.vstack([-left_bar, right_bar])
    A = np.column_stack(
        [G_left[:, list(_OUT_LEFT)], G_bar, G_right[:, list(_OUT_RIGHT)]]
    )
    rhs = _incidence_rhs(G_left, G_right)
    sol = _checked_solve(A, rhs, params)
    return _unpack(np.vstack([sol[0:2], sol[6:8]]), kin)


def _scattering_from_entries(entries, kin):
    G_left = np.eye(4, dtype=complex)
    G_right = -np.asarray(entries, dtype=complex)
    A = np.column_stack([G_left[:, list(_OUT_LEFT)], G_right[:, list(_OUT_RIGHT)]])
    sol = _checked_solve(A, _incidence_rhs(G_left, G_right), None)
    return _unpack(sol, kin)


def _checked_solve(A, rhs, params):
    try:
        return np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatchingError(
            f"singular boundary-value system for {params} "
            f"(cond ~ {np.linalg.cond(A):.3g})"
        ) from exc


def closed_form_amplitudes(alpha: AlphaMatrix) -> dict[str, complex]:
    """The six amplitudes expressed directly through alpha entries."""
    a = alpha
    d_alpha = a[1, 3] * a[3, 1] - a[1, 1] * a[3, 3]
    if d_alpha == 0:
        raise SingularMatchingError(f"d_alpha vanishes for {alpha.params}")
    return {
        "t_l11": -a[3, 3] / d_alpha,
        "t_l12": a[3, 1] / d_alpha,
        "t_l22": -a[1, 1] / d_alpha,
        "r_l11": (a[2, 3] * a[3, 1] - a[2, 1] * a[3, 3]) / d_alpha,
        "r_l22": (a[4, 1] * a[1, 3] - a[4, 3] * a[1, 1]) / d_alpha,
    }


def single_barrier(params: PhysicalParams, barrier_start: float = 0.0) -> ScatteringSet:
    """Amplitudes of one field on ``[barrier_start, barrier_start + l]``.

    Same boundary-value problems as :func:`scattering_from_alpha`, without
    forming the alpha product.
    """
    kin = channel_kinematics(params)
    if params.omega == 0:
        return _trivial_set(kin)
    blocks = _interface_blocks(params, kin, barrier_start)
    return _scattering_from_interfaces(blocks, kin, params)


def one_channel_amplitudes(k: float, height: float, l: float) -> tuple[complex, complex]:
    """Transmission and reflection amplitudes of a rectangular potential
    ``height`` on ``[0, l]`` for a wave ``exp(ikx)`` incident from the left.

    The transmitted wave is ``tau * exp(ikx)`` (absolute phase), so
    ``height = 0`` gives ``tau = 1``.
    """
    kappa = branch_sqrt(k * k - 2 * height)
    c = np.cos(kappa * l)
    s = np.sinc(kappa * l / np.pi) * l  # sin(kappa l) / kappa, finite at kappa = 0
    denom = 2 * k * c - 1j * (k * k + kappa * kappa) * s
    tau = 2 * k * np.exp(-1j * k * l) / denom
    rho = 1j * (kappa * kappa - k * k) * s / denom
    return complex(tau), complex(rho)
