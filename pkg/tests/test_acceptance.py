"""Acceptance suite.  Each criterion prints one PASS/FAIL line; run with
``pytest tests/test_acceptance.py -s`` to see them."""
import math
import time

import numpy as np
import pytest

from conftest import FIG3, FIG5, random_params
from ultracold_ramsey.approx import (
    p12_direct,
    p12_semiclassical,
    p12_series,
    p12_ultracold,
    resonance_estimates,
    t12_composed,
)
from ultracold_ramsey.barrier import (
    alpha_closed_form,
    alpha_from_matrices,
    one_channel_amplitudes,
    single_barrier,
)
from ultracold_ramsey.cli import main
from ultracold_ramsey.core import PhysicalParams, channel_kinematics
from ultracold_ramsey.exact import double_barrier_solve, p12_exact
from ultracold_ramsey.oracle import SliceGrid, amplitude_difference, integrate_sliced
from ultracold_ramsey.sweep import SweepConfig, SweepResult, compare_methods, find_peaks, run_sweep

pytestmark = pytest.mark.acceptance


def verdict(number, title, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail}")
    return ok


@pytest.fixture(scope="module")
def random_grid():
    return random_params(np.random.default_rng(10_000), 10_000)


@pytest.fixture(scope="module")
def fig3_sweep():
    cfg = SweepConfig(PhysicalParams(delta=0.0, **FIG3), range=(-0.5, 3.0), n_points=5000,
                      methods=("exact", "scl", "direct"))
    t0 = time.perf_counter()
    result = run_sweep(cfg)
    return result, time.perf_counter() - t0


def test_01_flux_unitarity(random_grid):
    t0 = time.perf_counter()
    single = max(single_barrier(p).unitarity_residual() for p in random_grid)
    double = max(double_barrier_solve(p, check_transfer=False).flux_residual for p in random_grid)
    elapsed = time.perf_counter() - t0
    ok = single < 1e-10 and double < 1e-10 and elapsed < 10
    assert verdict(1, "flux unitarity", ok,
                   f"single {single:.2e}, double {double:.2e} over {len(random_grid)} sets in {elapsed:.2f} s")


def test_02_cross_method_exactness(random_grid):
    t12 = 0.0
    for p in random_grid:
        exact = double_barrier_solve(p, check_transfer=False).T12
        composed = t12_composed(single_barrier(p), single_barrier(p, p.l + p.L))
        t12 = max(t12, abs(exact - composed))
    alpha = 0.0
    for p in random_grid:
        built = alpha_from_matrices(0.0, p)
        scale = np.abs(built.entries).max()
        for (i, j), value in alpha_closed_form(p).items():
            alpha = max(alpha, abs(built[i, j] - value) / scale)
    ok = t12 < 1e-10 and alpha < 1e-10
    assert verdict(2, "cross-method exactness", ok,
                   f"composed T12 {t12:.2e}, closed-form alpha {alpha:.2e}")


def test_03_oracle_equivalence():
    cases = [PhysicalParams(delta=d, **FIG3) for d in (-0.45, -0.1, 0.0, 0.4, 2.5)]
    cases += [PhysicalParams(delta=d, **FIG5) for d in (-0.004, 0.0029, 0.0266, 0.1)]
    stiff = cases[-1]
    worst = 0.0
    for p in cases:
        exact = double_barrier_solve(p)
        for n in (1, 16):
            worst = max(worst, amplitude_difference(integrate_sliced(p, SliceGrid.uniform(p, n)), exact))
    kin = channel_kinematics(stiff)
    stiffness = abs(kin.k_plus) * stiff.l
    ok = worst < 1e-8 and kin.k_plus.real == 0 and stiffness > 8
    assert verdict(3, "oracle equivalence", ok,
                   f"max amplitude residual {worst:.2e}, stiff |k+|l = {stiffness:.2f}")


def test_04_fast_atom_fringes(fig3_sweep):
    result, elapsed = fig3_sweep
    x, exact = result.axis(), result.column("exact")
    rms = compare_methods(result, "exact", "direct").rms

    idx = np.flatnonzero((exact[1:-1] < exact[:-2]) & (exact[1:-1] <= exact[2:])) + 1
    zeros = x[idx]
    neg = np.sort(-zeros[(zeros < 0)])              # distances from zero, moving towards delta_cr
    pos = np.sort(zeros[(zeros > 0) & (zeros < 1.0)])
    n = min(len(neg), len(pos))
    closer = n >= 3 and all(neg[i] < pos[i] for i in range(n))
    closer &= all(a < b for a, b in zip(np.diff(neg), np.diff(pos)))

    widths = [p.fwhm for p in find_peaks(result, "exact") if p.position < 0]
    shrinking = len(widths) >= 3 and all(a < b for a, b in zip(widths, widths[1:]))

    ok = rms < 0.02 and closer and shrinking and elapsed < 5
    assert verdict(4, "fast-atom fringes", ok,
                   f"exact-direct rms {rms:.4f}; zeros |d<0| {np.round(neg[:n], 3).tolist()} vs "
                   f"d>0 {np.round(pos[:n], 3).tolist()}; widths toward cutoff "
                   f"{[round(w, 4) for w in reversed(widths)]}; sweep {elapsed:.2f} s")


def test_05_ultracold_resonances():
    params = PhysicalParams(delta=0.0, **FIG5)
    result = run_sweep(SweepConfig(params, range=(-0.005, 0.2), n_points=2000,
                                   methods=("exact", "ultracold")))
    peak_max = float(np.nanmax(result.column("exact")))
    rms = compare_methods(result, "exact", "ultracold").rms
    peaks = find_peaks(result, "exact", k=params.k, L=params.L)
    offsets = [abs(p.relative_offset) for p in peaks]
    ok = rms < 0.05 * peak_max and len(peaks) > 0 and max(offsets) < 0.25
    # cross-check the annotation against the resonance formula directly
    centers = [e.delta_n for e in resonance_estimates(params.k, params.L, 6)]
    assert all(min(abs(p.position - c) for c in centers) == pytest.approx(abs(p.position - p.nearest_delta_n))
               for p in peaks)
    assert verdict(5, "ultracold resonances", ok,
                   f"rms {rms:.2e} vs 0.05*max {0.05 * peak_max:.2e}; {len(peaks)} peaks, "
                   f"worst offset {max(offsets):.3f} of the spacing")


def test_06_semiclassical_recovery():
    devs = []
    for k in (5.0, 20.0, 80.0):
        p = PhysicalParams(k, math.pi / 20, 0.05, 1.0, 25.0)
        devs.append(abs(p12_exact(p) - p12_semiclassical(p)))
    ok = devs[0] > devs[1] > devs[2]
    assert verdict(6, "semiclassical recovery", ok,
                   "deviation at k=5,20,80: " + ", ".join(f"{d:.2e}" for d in devs))


def test_07_resonant_decoupling():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        k, omega, l = rng.uniform(0.05, 10), rng.uniform(1e-3, 50), rng.uniform(0.1, 3)
        s = single_barrier(PhysicalParams(k, omega, 0.0, l, 0.0))
        tp, rp = one_channel_amplitudes(k, omega / 2, l)
        tm, rm = one_channel_amplitudes(k, -omega / 2, l)
        expect_t = np.array([[tp + tm, tp - tm], [tp - tm, tp + tm]]) / 2
        expect_r = np.array([[rp + rm, rp - rm], [rp - rm, rp + rm]]) / 2
        worst = max(worst, np.abs(s.t_l - expect_t).max(), np.abs(s.r_l - expect_r).max())
    ok = worst < 1e-10
    assert verdict(7, "resonant decoupling", ok, f"max deviation {worst:.2e} over 1000 sets")


def test_08_cutoff():
    rng = np.random.default_rng(8)
    values = []
    for _ in range(100):
        k = rng.uniform(0.05, 10)
        p = PhysicalParams(k, rng.uniform(0, 50), -0.5 * k * k - rng.uniform(0, 10),
                           rng.uniform(0.1, 3), rng.uniform(0, 50))
        # the classical fringe formula has no threshold and is left out
        values += [f(p) for f in (p12_exact, p12_direct, p12_ultracold, p12_series)]
    ok = all(v == 0.0 for v in values)
    assert verdict(8, "cutoff", ok, f"{sum(v == 0.0 for v in values)}/{len(values)} values exactly zero")


def test_09_ultracold_scaling():
    omega, worst = 15 * math.pi, 0.0
    for k in (0.09, 0.05, 0.02):
        for delta in (0.0, 0.01, 0.05):
            assert 0.5 * k * k / omega <= 1e-4
            a = single_barrier(PhysicalParams(k, omega, delta, 1.2, 25.0))
            b = single_barrier(PhysicalParams(k / math.sqrt(2), omega, delta, 1.2, 25.0))
            ratio = abs(b.t_l[0, 1]) / abs(a.t_l[0, 1])
            worst = max(worst, abs(ratio * math.sqrt(2) - 1))
    ok = worst < 0.1
    assert verdict(9, "ultracold amplitude scaling", ok,
                   f"|t12| ratio on halving E_k within {worst:.2e} of 1/sqrt(2)")


def test_10_cli_reproducibility(tmp_path, capsys):
    args = ["--k", "1", "--omega", repr(math.pi / 20), "--l", "1", "--gap", "25", "--points", "400",
            "--methods", "exact,scl,direct,ultracold", "--adaptive", "--verify"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    codes = [main(args + ["--out", str(a)]), main(args + ["--out", str(b)])]
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    text = a.read_text(encoding="utf-8")
    parsed = SweepResult.from_csv(text)
    lossless = parsed.to_csv() == text and all(
        row == tuple(None if f == "" else float(f) for f in line.split(","))
        for row, line in zip(parsed.table(), text.splitlines()[1:])
    )
    ok = codes == [0, 0] and same and lossless
    with capsys.disabled():
        verdict(10, "CLI reproducibility", ok,
                f"{len(parsed.rows)} rows, byte-identical {same}, lossless round-trip {lossless}")
    assert ok
