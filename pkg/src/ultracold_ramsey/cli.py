"""Command-line sweeps.

Example::

    ultracold-ramsey --k 1 --omega 0.15707963 --l 1 --gap 25 \\
        --min -0.5 --max 3 --points 2000 --methods exact,scl,direct \\
        --compare exact,direct --out fig3.csv

The approximations are evaluated wherever they are finite; ``direct`` is
meant for kinetic energies well above the Rabi energy, ``ultracold`` for the
opposite limit and ``scl`` additionally assumes ``k**2/2 >> |delta|``.

Exit status: 0 on success, 1 for an invalid configuration, 2 when more than
1% of the sweep points failed numerically.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .core import ParameterError, PhysicalParams
from .sweep import (
    METHODS,
    ConfigError,
    SweepConfig,
    compare_methods,
    find_peaks,
    run_sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2
FAILURE_LIMIT = 0.01

_FLOAT_KEYS = ("k", "omega", "l", "gap", "delta", "min", "max")
_INT_KEYS = ("points", "depth", "slices", "workers")
_BOOL_KEYS = ("adaptive", "verify", "peaks")
_STR_KEYS = ("axis", "methods", "compare", "out")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ultracold-ramsey", description=__doc__.split("\n\n")[0])
    p.add_argument("--k", type=float, help="incident wavenumber")
    p.add_argument("--omega", type=float, help="Rabi frequency")
    p.add_argument("--l", type=float, help="width of each field")
    p.add_argument("--gap", type=float, help="free gap L between the fields")
    p.add_argument("--delta", type=float, help="detuning (fixed value for --axis k)")
    p.add_argument("--axis", choices=("delta", "k"))
    p.add_argument("--min", type=float, help="sweep start (default: critical detuning)")
    p.add_argument("--max", type=float, help="sweep end (default 3 on the delta axis)")
    p.add_argument("--points", type=int)
    p.add_argument("--methods", help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--adaptive", action="store_true", default=None)
    p.add_argument("--depth", type=int, help="adaptive refinement depth (max 12)")
    p.add_argument("--verify", action="store_true", default=None,
                   help="compare every point with the slicing oracle")
    p.add_argument("--slices", type=int, help="oracle slices per region")
    p.add_argument("--peaks", action="store_true", default=None)
    p.add_argument("--compare", help="two methods, e.g. exact,direct")
    p.add_argument("--workers", type=int)
    p.add_argument("--config", type=Path, help="key=value file; flags take precedence")
    p.add_argument("--out", help="CSV output file (default: standard output)")
    return p


def read_config_file(path: Path) -> dict:
    """Flat ``key = value`` lines, ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            if key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _INT_KEYS:
                out[key] = int(value)
            elif key in _BOOL_KEYS:
                out[key] = value.lower() in ("1", "true", "yes", "on")
            elif key in _STR_KEYS:
                out[key] = value
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _merge(args: argparse.Namespace) -> dict:
    settings = read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            settings[key] = value
    return settings


def config_from_settings(settings: dict) -> SweepConfig:
    missing = [k for k in ("k", "omega", "l", "gap") if k not in settings]
    axis = settings.get("axis", "delta")
    if axis == "k":
        missing = [m for m in missing if m != "k"]
        if "delta" not in settings:
            missing.append("delta")
    if missing:
        raise ConfigError("missing required settings: " + ", ".join(missing))
    if axis == "delta":
        k = settings["k"]
        lo = settings.get("min", -0.5 * k * k)
        hi = settings.get("max", 3.0)
    else:
        if "min" not in settings or "max" not in settings:
            raise ConfigError("--axis k needs --min and --max")
        lo, hi = settings["min"], settings["max"]
        k = lo if lo > 0 else 1.0  # placeholder; every point overrides it
    try:
        params = PhysicalParams(
            k=k, omega=settings["omega"], delta=settings.get("delta", lo),
            l=settings["l"], L=settings["gap"],
        )
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    methods = tuple(m.strip() for m in settings.get("methods", "exact").split(",") if m.strip())
    return SweepConfig(
        params=params,
        axis=axis,
        range=(lo, hi),
        n_points=settings.get("points", 201),
        methods=methods,
        adaptive=bool(settings.get("adaptive", False)),
        refine_depth=settings.get("depth", 6),
        verify=bool(settings.get("verify", False)),
        oracle_slices=settings.get("slices", 4),
        workers=settings.get("workers", 1),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _merge(args)
        config = config_from_settings(settings)
        compare = None
        if "compare" in settings:
            compare = [m.strip() for m in settings["compare"].split(",")]
            if len(compare) != 2 or any(m not in config.methods for m in compare):
                raise ConfigError("--compare needs two of the selected methods")
    except (ConfigError, OSError) as exc:
        print(f"ultracold-ramsey: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    result = run_sweep(config)
    text = result.to_csv()
    out = settings.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    reports = []
    if compare:
        reports.append(compare_methods(result, *compare).format())
    if settings.get("peaks"):
        for method in config.methods:
            reports.append(find_peaks(result, method, k=config.params.k, L=config.params.L).format())
    if config.verify:
        worst = max((r.oracle_residual for r in result.rows if r.oracle_residual is not None),
                    default=math.nan)
        reports.append(f"oracle: max amplitude residual {worst:.3g}")
    if reports:
        if not out:
            sys.stdout.write("\n")
        print("\n\n".join(reports))

    failed = sum(r.error is not None for r in result.rows)
    if failed:
        print(f"ultracold-ramsey: {failed}/{len(result.rows)} points failed", file=sys.stderr)
    return EXIT_NUMERICAL if result.failure_rate > FAILURE_LIMIT else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
