import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ultracold_ramsey.core import (
    ParameterError,
    PhysicalParams,
    branch_sqrt,
    channel_kinematics,
    critical_detuning,
    dressed_eigenvalues,
    dressed_mixing_angle,
    effective_rabi,
)


@pytest.mark.parametrize("omega, delta, expected", [
    (0.0, 0.0, 0.0),
    (3.0, 4.0, 5.0),
    (math.pi / 20, 0.0, math.pi / 20),
])
def test_effective_rabi(omega, delta, expected):
    assert effective_rabi(omega, delta) == pytest.approx(expected, abs=1e-15)


def test_dressed_eigenvalues_examples():
    assert dressed_eigenvalues(2.0, 0.0) == pytest.approx((1.0, -1.0))
    # (-4 +- 5) / 2
    assert dressed_eigenvalues(3.0, 4.0) == pytest.approx((0.5, -4.5), rel=1e-15)
    assert dressed_eigenvalues(0.0, 2.5) == (0.0, -2.5)
    assert dressed_eigenvalues(0.0, -2.5) == (2.5, 0.0)


def test_dressed_eigenvalues_rejects_negative_omega():
    with pytest.raises(ParameterError):
        dressed_eigenvalues(-1.0, 0.0)


def test_dressed_identities_random_grid():
    rng = np.random.default_rng(7)
    omega = rng.uniform(0, 50, 10_000)
    delta = rng.uniform(-50, 50, 10_000)
    for om, de in zip(omega, delta):
        lp, lm = dressed_eigenvalues(om, de)
        assert lp >= lm
        scale = max(abs(de), effective_rabi(om, de))
        assert abs(lp + lm + de) <= 1e-12 * scale
        assert abs(lp * lm + om * om / 4) <= 1e-12 * scale**2


def test_mixing_angle_matches_unnormalized_weight():
    for om, de in [(3.0, 4.0), (1.0, -7.0), (0.2, 0.0)]:
        lp, _ = dressed_eigenvalues(om, de)
        assert math.tan(dressed_mixing_angle(om, de)) == pytest.approx(2 * lp / om, rel=1e-12)


def test_branch_sqrt():
    assert branch_sqrt(4.0) == 2.0
    assert branch_sqrt(-9.0) == 3j
    assert branch_sqrt(0.0) == 0.0


def test_kinematics_examples():
    kin = channel_kinematics(PhysicalParams(1.0, 0.3, 0.0, 1.0, 5.0))
    assert kin.q == 1.0
    kin = channel_kinematics(PhysicalParams(1.0, 0.3, -0.5, 1.0, 5.0))
    assert kin.q == 0.0
    assert kin.delta_cr == -0.5
    assert not kin.propagating
    # lambda_+ = 15 pi / 2, so k_+^2 = 0.01 - 15 pi
    kin = channel_kinematics(PhysicalParams(0.1, 15 * math.pi, 0.0, 1.2, 25.0))
    assert kin.k_plus == pytest.approx(1j * math.sqrt(15 * math.pi - 0.01), rel=1e-14)
    assert kin.k_plus.real == 0.0


@pytest.mark.parametrize("bad", [
    dict(k=0.0), dict(k=-1.0), dict(omega=-0.1), dict(l=0.0), dict(L=-1.0), dict(delta=math.nan),
])
def test_params_validation(bad):
    base = dict(k=1.0, omega=1.0, delta=0.0, l=1.0, L=1.0)
    with pytest.raises(ParameterError):
        PhysicalParams(**{**base, **bad})


finite = dict(allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(
    k=st.floats(0.01, 20, **finite),
    omega=st.floats(0, 60, **finite),
    delta=st.floats(-60, 60, **finite),
)
def test_kinematics_invariants(k, omega, delta):
    params = PhysicalParams(k, omega, delta, 1.0, 1.0)
    kin = channel_kinematics(params)
    assert kin.omega_eff >= max(omega, abs(delta))
    assert kin.delta_cr == critical_detuning(k) == -0.5 * k * k
    for w, w2 in [(kin.q, k * k + 2 * delta),
                  (kin.k_plus, k * k - 2 * kin.lambda_plus),
                  (kin.k_minus, k * k - 2 * kin.lambda_minus)]:
        assert (w.imag == 0 and w.real >= 0) or (w.real == 0 and w.imag > 0)
        assert abs(w * w - w2) <= 1e-12 * max(abs(w2), k * k, 1e-300)
    if delta > kin.delta_cr:
        assert kin.q.real > 0 and kin.q.imag == 0
    elif delta < kin.delta_cr:
        assert kin.q.real == 0 and kin.q.imag > 0
    # pure and deterministic
    assert channel_kinematics(params) == kin
