"""Parameter sweeps over detuning or incident wavenumber, CSV tables, peak
finding and method comparison."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .approx import (
    VanishingDenominatorError,
    p12_direct,
    p12_semiclassical,
    p12_series,
    p12_ultracold,
    resonance_estimates,
)
from .barrier import SingularMatchingError
from .core import ParameterError, PhysicalParams, channel_kinematics
from .exact import double_barrier_solve
from .oracle import OracleError, SliceGrid, amplitude_difference, integrate_sliced

METHODS = ("exact", "scl", "direct", "ultracold", "series")
AXES = ("delta", "k")
MAX_REFINE_DEPTH = 12
CSV_COLUMNS = (
    "p12_exact", "p12_scl", "p12_direct", "p12_ultracold",
    "flux_residual", "oracle_residual", "p12_series",
)

_APPROX = {
    "scl": p12_semiclassical,
    "direct": p12_direct,
    "ultracold": p12_ultracold,
    "series": p12_series,
}
_NUMERICAL_ERRORS = (
    SingularMatchingError, VanishingDenominatorError, OracleError,
    np.linalg.LinAlgError, ZeroDivisionError, FloatingPointError,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    """``params`` supplies every fixed quantity; the swept one is overwritten
    point by point."""

    params: PhysicalParams
    axis: str = "delta"
    range: tuple[float, float] = (-0.5, 3.0)
    n_points: int = 201
    methods: tuple[str, ...] = ("exact",)
    adaptive: bool = False
    refine_depth: int = 6
    verify: bool = False
    oracle_slices: int = 4
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.range
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}, got {self.axis!r}")
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"invalid range {self.range}")
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods must be a non-empty subset of {METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate methods")
        if not 0 <= self.refine_depth <= MAX_REFINE_DEPTH:
            raise ConfigError(f"refine_depth must be in [0, {MAX_REFINE_DEPTH}]")
        if self.axis == "k" and lo <= 0:
            raise ConfigError("k sweep needs a positive lower bound")
        if self.oracle_slices < 1 or self.workers < 1:
            raise ConfigError("oracle_slices and workers must be positive")

    def params_at(self, x: float) -> PhysicalParams:
        return self.params.replace(**{self.axis: float(x)})

    @property
    def primary_method(self) -> str:
        return "exact" if "exact" in self.methods else self.methods[0]


@dataclass
class SweepRow:
    axis: float
    values: dict[str, float | None]
    flux_residual: float | None = None
    oracle_residual: float | None = None
    error: str | None = None

    def csv_fields(self) -> list[float | None]:
        v = self.values
        return [
            v.get("exact"), v.get("scl"), v.get("direct"), v.get("ultracold"),
            self.flux_residual, self.oracle_residual, v.get("series"),
        ]


@dataclass
class SweepResult:
    axis_name: str
    rows: list[SweepRow] = field(default_factory=list)

    def axis(self) -> np.ndarray:
        return np.array([r.axis for r in self.rows])

    def column(self, method: str) -> np.ndarray:
        return np.array(
            [np.nan if r.values.get(method) is None else r.values[method] for r in self.rows]
        )

    def methods(self) -> list[str]:
        return [m for m in METHODS if any(r.values.get(m) is not None for r in self.rows)]

    @property
    def failure_rate(self) -> float:
        return sum(r.error is not None for r in self.rows) / max(len(self.rows), 1)

    def table(self) -> list[tuple]:
        return [(r.axis, *r.csv_fields()) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow((self.axis_name, *CSV_COLUMNS))
        for row in self.table():
            writer.writerow(["" if v is None else repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepResult":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(header[1:]) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        result = cls(header[0])
        names = ("exact", "scl", "direct", "ultracold", None, None, "series")
        for fields in reader:
            vals = [None if f == "" else float(f) for f in fields]
            result.rows.append(
                SweepRow(
                    axis=vals[0],
                    values={m: v for m, v in zip(names, vals[1:]) if m is not None and v is not None},
                    flux_residual=vals[5],
                    oracle_residual=vals[6],
                )
            )
        return result


def evaluate_point(config: SweepConfig, x: float) -> SweepRow:
    """All requested methods at one axis value; failures are recorded, not raised."""
    row = SweepRow(axis=float(x), values={})
    try:
        params = config.params_at(x)
    except ParameterError as exc:
        row.error = str(exc)
        return row
    errors = []
    above_cutoff = params.delta > params.delta_cr and params.omega > 0
    amps = None
    at_cutoff = channel_kinematics(params).q == 0  # no scattering solution; P12 = 0
    if ("exact" in config.methods or config.verify) and not at_cutoff:
        try:
            amps = double_barrier_solve(params, check_transfer=False)
            row.flux_residual = amps.flux_residual
        except _NUMERICAL_ERRORS as exc:
            errors.append(f"exact: {exc}")
    if "exact" in config.methods:
        if at_cutoff or (amps is not None and not above_cutoff):
            row.values["exact"] = 0.0
        else:
            row.values["exact"] = amps.p12() if amps else None
    for method in config.methods:
        if method == "exact":
            continue
        try:
            row.values[method] = _APPROX[method](params)
        except _NUMERICAL_ERRORS as exc:
            row.values[method] = None
            errors.append(f"{method}: {exc}")
    if config.verify and amps is not None and params.omega > 0:
        try:
            oracle = integrate_sliced(params, SliceGrid.uniform(params, config.oracle_slices))
            row.oracle_residual = amplitude_difference(oracle, amps)
        except _NUMERICAL_ERRORS as exc:
            errors.append(f"oracle: {exc}")
    elif config.verify and amps is not None:
        row.oracle_residual = 0.0
    if errors:
        row.error = "; ".join(errors)
    return row


def _evaluate_many(config: SweepConfig, xs) -> list[SweepRow]:
    xs = list(xs)
    if config.workers > 1 and len(xs) > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            return list(pool.map(evaluate_point, [config] * len(xs), xs, chunksize=64))
    return [evaluate_point(config, x) for x in xs]


def _refine(config: SweepConfig, rows: list[SweepRow]) -> list[SweepRow]:
    method = config.primary_method
    for _ in range(config.refine_depth):
        ys = np.array([np.nan if r.values.get(method) is None else r.values[method] for r in rows])
        if not np.any(np.isfinite(ys)):
            break
        threshold = 0.1 * np.nanmax(ys)
        jumps = np.abs(np.diff(ys))
        split = np.flatnonzero(jumps > threshold)
        if threshold <= 0 or split.size == 0:
            break
        mids = [0.5 * (rows[i].axis + rows[i + 1].axis) for i in split]
        new_rows = _evaluate_many(config, mids)
        merged = []
        inserts = dict(zip(split.tolist(), new_rows))
        for i, r in enumerate(rows):
            merged.append(r)
            if i in inserts:
                merged.append(inserts[i])
        rows = merged
    return rows


def run_sweep(config: SweepConfig) -> SweepResult:
    """Evaluate the configured methods on a uniform grid, optionally refining
    intervals where the primary method jumps by more than a tenth of its
    maximum.  Original grid points are never re-evaluated."""
    lo, hi = config.range
    rows = _evaluate_many(config, np.linspace(lo, hi, config.n_points))
    if config.adaptive:
        rows = _refine(config, rows)
    return SweepResult(config.axis, rows)


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    fwhm: float
    nearest_n: int | None = None
    nearest_delta_n: float | None = None
    relative_offset: float | None = None


@dataclass
class PeakReport:
    method: str
    peaks: list[Peak]

    def __len__(self):
        return len(self.peaks)

    def __iter__(self):
        return iter(self.peaks)

    def format(self) -> str:
        lines = [f"peaks ({self.method}): {len(self.peaks)}"]
        if self.peaks:
            lines.append(
                f"{'position':>14} {'height':>12} {'fwhm':>12} {'n':>4} {'delta_n':>14} {'offset':>9}"
            )
        for p in self.peaks:
            n = "" if p.nearest_n is None else str(p.nearest_n)
            dn = "" if p.nearest_delta_n is None else f"{p.nearest_delta_n:.8g}"
            off = "" if p.relative_offset is None else f"{p.relative_offset:+.3f}"
            lines.append(
                f"{p.position:14.8g} {p.height:12.6g} {p.fwhm:12.6g} {n:>4} {dn:>14} {off:>9}"
            )
        return "\n".join(lines)


def _vertex(x, y):
    # parabola through three points; falls back to the middle sample when flat
    (x0, x1, x2), (y0, y1, y2) = x, y
    d01, d12 = (y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1)
    curv = (d12 - d01) / (x2 - x0)
    if curv >= 0:
        return x1, y1
    xv = 0.5 * (x0 + x1) - d01 / (2 * curv)
    xv = min(max(xv, x0), x2)
    yv = y0 + d01 * (xv - x0) + curv * (xv - x0) * (xv - x1)
    return xv, max(yv, y1)


def _half_crossing(x, y, i, half, step):
    j = i
    while 0 <= j + step < len(y):
        if y[j + step] < half:
            a, b = j, j + step
            return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a])
        j += step
    return x[j]


def find_peaks(result: SweepResult, method: str, min_height: float = 0.0,
               k: float | None = None, L: float | None = None) -> PeakReport:
    """Local maxima of one P12 column with interpolated position, height and
    full width at half maximum.

    On a detuning axis, passing ``k`` and ``L`` annotates each peak with the
    nearest gap resonance ``delta_n`` and its offset in units of the local
    resonance spacing.
    """
    x, y = result.axis(), result.column(method)
    ok = np.isfinite(y)
    x, y = x[ok], y[ok]
    peaks = []
    if len(y) < 3:
        return PeakReport(method, peaks)
    estimates = []
    if k is not None and L is not None and L > 0 and result.axis_name == "delta":
        n_max = int(L * math.sqrt(max(k * k + 2 * x.max(), 0.0)) / math.pi) + 3
        estimates = resonance_estimates(k, L, n_max)
    for i in range(1, len(y) - 1):
        if not (y[i] > y[i - 1] and y[i] >= y[i + 1]) or y[i] <= min_height:
            continue
        pos, height = _vertex(x[i - 1:i + 2], y[i - 1:i + 2])
        half = 0.5 * height
        width = _half_crossing(x, y, i, half, +1) - _half_crossing(x, y, i, half, -1)
        if width <= 0:
            continue
        peak = Peak(float(pos), float(height), float(width))
        if estimates:
            peak = _annotate(peak, estimates)
        peaks.append(peak)
    peaks.sort(key=lambda p: p.position)
    return PeakReport(method, peaks)


def _annotate(peak: Peak, estimates) -> Peak:
    centers = np.array([e.delta_n for e in estimates])
    j = int(np.argmin(np.abs(centers - peak.position)))
    gaps = np.diff(centers)
    if len(gaps) == 0:
        spacing = float("nan")
    elif j == 0:
        spacing = gaps[0]
    elif j == len(centers) - 1:
        spacing = gaps[-1]
    else:
        spacing = 0.5 * (gaps[j - 1] + gaps[j])
    return Peak(
        peak.position, peak.height, peak.fwhm, estimates[j].n, float(centers[j]),
        float((peak.position - centers[j]) / spacing),
    )


@dataclass(frozen=True)
class MethodComparison:
    method_a: str
    method_b: str
    rms: float
    max_abs: float
    correlation: float
    n: int

    def format(self) -> str:
        return (
            f"{self.method_a} vs {self.method_b}: n={self.n}  rms={self.rms:.6g}  "
            f"max_abs={self.max_abs:.6g}  corr={self.correlation:.6f}"
        )


def compare_methods(result: SweepResult, method_a: str, method_b: str, mask=None) -> MethodComparison:
    a, b = result.column(method_a), result.column(method_b)
    keep = np.isfinite(a) & np.isfinite(b)
    if mask is not None:
        keep &= np.asarray(mask, dtype=bool)
    a, b = a[keep], b[keep]
    if a.size == 0:
        raise ValueError(f"no common points for {method_a} and {method_b}")
    diff = a - b
    if a.size > 1 and np.std(a) > 0 and np.std(b) > 0:
        corr = float(np.corrcoef(a, b)[0, 1])
    else:
        corr = 1.0 if np.array_equal(a, b) else float("nan")
    return MethodComparison(
        method_a, method_b, float(np.sqrt(np.mean(diff**2))), float(np.abs(diff).max()),
        corr, int(a.size),
    )
