"""Independent check of the exact solver by slicing the axis into thin layers.

Each layer is diagonalized numerically and layers are chained with scattering
matrices (Redheffer star products).  Only decaying exponentials ever appear,
so the composition stays bounded however evanescent the dressed waves are.
Nothing from the barrier/exact solution path is reused.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PhysicalParams, branch_sqrt
from .exact import DoubleBarrierAmplitudes, double_barrier_solve


class OracleError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class SliceGrid:
    n_slices_per_barrier: int
    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 1 or len(pos) < 2 or np.any(np.diff(pos) <= 0):
            raise ValueError("slice boundaries must be strictly increasing")

    @classmethod
    def uniform(cls, params: PhysicalParams, n: int) -> "SliceGrid":
        """``n`` equal slices in each field region and in the gap."""
        if n < 1:
            raise ValueError("need at least one slice per region")
        l, L = params.l, params.L
        edges = [(0.0, l), (l, l + L), (l + L, 2 * l + L)]
        pieces = [np.linspace(a, b, n + 1)[:-1] for a, b in edges if b > a]
        return cls(n, np.concatenate(pieces + [np.array([2 * l + L])]))


def mesa_profile(params: PhysicalParams):
    l, L = params.l, params.L

    def omega_at(x):
        inside = (0 <= x <= l) or (l + L <= x <= 2 * l + L)
        return params.omega if inside else 0.0

    return omega_at


def _layer_modes(params, omega_x):
    V = np.array([[0.0, 0.5 * omega_x], [0.5 * omega_x, -params.delta]])
    mu, U = np.linalg.eigh(V)
    kappa = np.array([branch_sqrt(params.k**2 - 2 * m) for m in mu])
    return U.astype(complex), kappa


def _interface(UA, kA, UB, kB):
    # amplitudes referenced at the interface; returns S with (b, c) = S (a, d)
    M = np.block([[UA, -UB], [-UA * (1j * kA), -UB * (1j * kB)]])
    N = np.block([[-UA, UB], [-UA * (1j * kA), -UB * (1j * kB)]])
    try:
        S = np.linalg.solve(M, N)
    except np.linalg.LinAlgError as exc:
        raise OracleError("singular interface (vanishing local wavenumber?)") from exc
    return S[2:, :2], S[:2, :2], S[:2, 2:], S[2:, 2:]  # t, r, t', r'


def _star(S1, S2):
    t1, r1, tp1, rp1 = S1
    t2, r2, tp2, rp2 = S2
    eye = np.eye(2)
    inner = np.linalg.solve(eye - rp1 @ r2, np.column_stack([t1, rp1 @ tp2]))
    fwd_a, fwd_d = inner[:, :2], inner[:, 2:]
    back = np.linalg.solve(eye - r2 @ rp1, tp2)
    return (
        t2 @ fwd_a,
        r1 + tp1 @ r2 @ fwd_a,
        tp1 @ back,
        rp2 + t2 @ fwd_d,
    )


def _propagate(kappa, width):
    P = np.diag(np.exp(1j * kappa * width))
    Z = np.zeros((2, 2), dtype=complex)
    return P, Z, P.copy(), Z.copy()


def integrate_sliced(params: PhysicalParams, grid: SliceGrid, profile=None) -> DoubleBarrierAmplitudes:
    """Double-barrier amplitudes from piecewise-constant slices of the
    Rabi profile (mesa by default), sampled at slice midpoints."""
    profile = profile or mesa_profile(params)
    pos = np.asarray(grid.positions, dtype=float)
    outer_U = np.eye(2, dtype=complex)
    outer_k = np.array([branch_sqrt(params.k**2), branch_sqrt(params.k**2 + 2 * params.delta)])

    U_prev, k_prev = outer_U, outer_k
    total = None
    with np.errstate(all="raise"):
        try:
            for left, right in zip(pos[:-1], pos[1:]):
                U, kap = _layer_modes(params, profile(0.5 * (left + right)))
                step = _star(_interface(U_prev, k_prev, U, kap), _propagate(kap, right - left))
                total = step if total is None else _star(total, step)
                U_prev, k_prev = U, kap
            total = _star(total, _interface(U_prev, k_prev, outer_U, outer_k))
        except (FloatingPointError, np.linalg.LinAlgError) as exc:
            raise OracleError(f"slice composition failed for {params}: {exc}") from exc

    t, r = total[0], total[1]
    X = pos[-1]
    return DoubleBarrierAmplitudes(
        T11=complex(t[0, 0] * np.exp(-1j * outer_k[0] * X)),
        T12=complex(t[1, 0] * np.exp(-1j * outer_k[1] * X)),
        R11=complex(r[0, 0]),
        R12=complex(r[1, 0]),
        k=params.k,
        q=complex(outer_k[1]),
    )


def amplitude_difference(a: DoubleBarrierAmplitudes, b: DoubleBarrierAmplitudes) -> float:
    """Largest amplitude mismatch, relative once an amplitude exceeds one
    (below the cutoff ``T12`` is exponentially large)."""
    pairs = ((a.T11, b.T11), (a.T12, b.T12), (a.R11, b.R11), (a.R12, b.R12))
    return max(abs(x - y) / max(1.0, abs(y)) for x, y in pairs)


@dataclass(frozen=True)
class ConvergenceRow:
    n_slices: int
    residual: float
    flux_residual: float


def convergence_report(params: PhysicalParams, slice_counts) -> list[ConvergenceRow]:
    """Oracle-vs-exact amplitude differences for several slicings."""
    counts = list(slice_counts)
    if not counts:
        raise ValueError("slice_counts must be non-empty")
    reference = double_barrier_solve(params)
    rows = []
    for n in counts:
        amps = integrate_sliced(params, SliceGrid.uniform(params, n))
        rows.append(ConvergenceRow(n, amplitude_difference(amps, reference), amps.flux_residual))
    return rows
