"""Command-line front end: evaluation, optimization, sweeps, thresholds,
algebra self checks and truncation-convergence studies.

Reports go to standard output or ``--out PATH`` as CSV or JSON; ``sweep`` and
``convergence`` can additionally render a PNG next to the delimited output
via ``--figure PATH``.  Exit codes: 0 success, 2 validation error, 1 internal
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bell_ops import ANGLE_PRESETS, AngleSet
from .chsh import (
    CONVERGENCE_CSV_HEADER,
    CSV_HEADER,
    canonical_preset,
    chsh,
    convergence_table,
)
from .fock import FockSpace
from .optimize import find_threshold, optimize_angles, parameter_sweep
from .selfcheck import algebra_report
from .states import (
    Werner,
    parse_state_spec,
    spec_parameter,
    state_spec_to_dict,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

DEFAULT_DIMS = (16, 16)
TAIL_WARN_LIMIT = 1e-3

_SWEEP_PARAMS = {
    "eta": "two_mode_squeezed",
    "w": "werner",
    "z_abs": "coherent_superposition",
    "z": "coherent_superposition",
}

_THRESHOLD_FAMILIES = ("coherent_superposition", "two_mode_squeezed", "werner")


class CliError(Exception):
    """Invalid configuration; reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    command: str
    spec_source: Optional[str] = None
    dims: Optional[tuple[int, int]] = None
    angles: Optional[str] = None
    method: str = "both"
    output: Optional[str] = None
    output_path: Optional[str] = None
    figure_path: Optional[str] = None
    param: Optional[str] = None
    param_from: Optional[float] = None
    param_to: Optional[float] = None
    steps: Optional[int] = None
    optimize_each: bool = False
    family: Optional[str] = None
    lo: Optional[float] = None
    hi: Optional[float] = None
    tolerance: float = 1e-10
    grid: int = 8
    dims_list: Optional[tuple[int, ...]] = None
    samples: int = 32
    seed: int = 0
    extra: dict = field(default_factory=dict)


def _fmt_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def parse_dims(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"--dims expects 'A,B', got {text!r}")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise CliError(f"--dims expects two integers, got {text!r}") from None
    return dims


def parse_angles(text: str) -> AngleSet:
    name = text[len("preset:"):] if text.startswith("preset:") else text
    if name in ANGLE_PRESETS:
        return ANGLE_PRESETS[name]
    parts = text.split(",")
    if len(parts) != 4:
        raise CliError(
            f"--angles expects 'preset:NAME' ({', '.join(sorted(ANGLE_PRESETS))}) "
            f"or four comma-separated radians, got {text!r}"
        )
    try:
        return AngleSet(*(float(p) for p in parts))
    except ValueError as exc:
        raise CliError(f"bad --angles value: {exc}") from None


def _load_spec(config: RunConfig, validate: bool = True):
    if not config.spec_source:
        raise CliError("--spec is required for this command")
    source = config.spec_source.strip()
    if not source.startswith("{"):
        try:
            source = Path(source).read_text()
        except OSError as exc:
            raise CliError(f"cannot read spec file: {exc}") from None
    try:
        return parse_state_spec(source, validate=validate)
    except (ValueError, IndexError) as exc:
        raise CliError(f"bad state spec: {exc}") from None


def _resolve_space(config: RunConfig, spec) -> FockSpace:
    if isinstance(spec, Werner):
        if config.dims is not None and tuple(config.dims) != (2, 2):
            raise CliError("the werner family lives on dims 2,2")
        return FockSpace(2, 2)
    dims = config.dims if config.dims is not None else DEFAULT_DIMS
    try:
        return FockSpace(*dims)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path:
        Path(config.output_path).write_text(text)
    else:
        sys.stdout.write(text)


def _to_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _warn_tail(bound: float) -> None:
    if bound > TAIL_WARN_LIMIT:
        print(
            f"warning: truncation error bound {bound:.3e} exceeds {TAIL_WARN_LIMIT}; "
            "increase --dims",
            file=sys.stderr,
        )


def _run_evaluate(config: RunConfig) -> None:
    spec = _load_spec(config)
    if config.angles is None:
        raise CliError("evaluate requires --angles")
    angles = parse_angles(config.angles)
    if config.method not in ("matrix", "closed_form", "both"):
        raise CliError(f"--method must be matrix, closed_form or both, got {config.method!r}")
    methods = ("matrix", "closed_form") if config.method == "both" else (config.method,)
    reports = {}
    for method in methods:
        if method == "matrix":
            space = _resolve_space(config, spec)
            report = chsh(spec, angles, "matrix", space=space)
            _warn_tail(report.truncation_error_bound)
        else:
            report = chsh(spec, angles, "closed_form")
        reports[method] = report
    if (config.output or "json") == "json":
        payload = {m: r.to_dict() for m, r in reports.items()}
        _emit(config, _to_json(payload))
    else:
        lines = [CSV_HEADER] + [reports[m].csv_row() for m in methods]
        _emit(config, "\n".join(lines) + "\n")


def _run_optimize(config: RunConfig) -> None:
    spec = _load_spec(config)
    method = "closed_form" if config.method == "both" else config.method
    if method not in ("matrix", "closed_form"):
        raise CliError(f"--method must be matrix or closed_form, got {config.method!r}")
    space = _resolve_space(config, spec) if method == "matrix" else None
    result = optimize_angles(spec, method, seed_grid_resolution=config.grid, space=space)
    context = {
        "spec": state_spec_to_dict(spec),
        "method": method,
        "grid": config.grid,
    }
    if (config.output or "json") == "json":
        payload = dict(context)
        payload.update(result.to_dict())
        _emit(config, _to_json(payload))
    else:
        header = "family,param,method,alpha1,alpha2,beta1,beta2,best_abs_chsh,iterations,converged"
        a = result.best_angles
        row = [
            spec.family,
            spec_parameter(spec),
            method,
            a.alpha1,
            a.alpha2,
            a.beta1,
            a.beta2,
            result.best_abs_chsh,
            result.iterations,
            result.converged,
        ]
        _emit(config, header + "\n" + ",".join(_fmt_csv(v) for v in row) + "\n")


def _run_sweep(config: RunConfig) -> None:
    spec = _load_spec(config, validate=False)
    if config.param is None:
        raise CliError("sweep requires --param (eta, w or z_abs)")
    family = _SWEEP_PARAMS.get(config.param)
    if family is None:
        raise CliError(f"--param must be one of {sorted(set(_SWEEP_PARAMS))}, got {config.param!r}")
    if family != spec.family:
        raise CliError(f"--param {config.param!r} does not belong to the {spec.family} family")
    if config.param_from is None or config.param_to is None or config.steps is None:
        raise CliError("sweep requires --from, --to and --steps")
    method = "closed_form" if config.method == "both" else config.method
    if method not in ("matrix", "closed_form"):
        raise CliError(f"--method must be matrix or closed_form, got {config.method!r}")
    angles = parse_angles(config.angles) if config.angles else None
    space = None
    if method == "matrix":
        space = _resolve_space(config, spec)
    try:
        rows = parameter_sweep(
            family,
            config.param_from,
            config.param_to,
            config.steps,
            per_point_optimize=config.optimize_each,
            method=method,
            space=space,
            angles=angles,
            seed_grid_resolution=config.grid,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if method == "matrix":
        worst = max(row.report.truncation_error_bound for row in rows)
        _warn_tail(worst)
    if (config.output or "csv") == "csv":
        lines = [CSV_HEADER] + [row.report.csv_row() for row in rows]
        _emit(config, "\n".join(lines) + "\n")
    else:
        payload = [
            {
                "parameter": row.parameter,
                "best_abs_chsh": row.best_abs_chsh,
                "violation": row.violation,
                "best_angles": row.best_angles.to_dict(),
                "report": row.report.to_dict(),
            }
            for row in rows
        ]
        _emit(config, _to_json(payload))
    if config.figure_path:
        from .figures import sweep_figure

        sweep_figure(rows, config.figure_path, parameter_label=config.param)


def _run_threshold(config: RunConfig) -> None:
    if config.family not in _THRESHOLD_FAMILIES:
        raise CliError(f"--family must be one of {_THRESHOLD_FAMILIES}, got {config.family!r}")
    if config.lo is None or config.hi is None:
        raise CliError("threshold requires --lo and --hi")
    try:
        value = find_threshold(config.family, config.lo, config.hi, config.tolerance)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    payload = {
        "family": config.family,
        "lo": config.lo,
        "hi": config.hi,
        "tolerance": config.tolerance,
        "threshold": value,
    }
    if (config.output or "json") == "json":
        _emit(config, _to_json(payload))
    else:
        header = "family,lo,hi,tolerance,threshold"
        row = ",".join(
            _fmt_csv(v) for v in (config.family, config.lo, config.hi, config.tolerance, value)
        )
        _emit(config, header + "\n" + row + "\n")


def _run_convergence(config: RunConfig) -> None:
    spec = _load_spec(config)
    if not config.dims_list:
        raise CliError("convergence requires --dims-list, e.g. 4,8,16,32")
    angles = parse_angles(config.angles) if config.angles else canonical_preset(spec)
    try:
        rows = convergence_table(spec, config.dims_list, angles)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if (config.output or "csv") == "csv":
        lines = [CONVERGENCE_CSV_HEADER]
        for row in rows:
            lines.append(
                ",".join(
                    _fmt_csv(v)
                    for v in (
                        row.dim,
                        row.chsh_matrix,
                        row.chsh_closed_form,
                        row.abs_difference,
                        row.tail_probability,
                    )
                )
            )
        _emit(config, "\n".join(lines) + "\n")
    else:
        payload = [
            {
                "dim": row.dim,
                "chsh_matrix": row.chsh_matrix,
                "chsh_closed_form": row.chsh_closed_form,
                "abs_difference": row.abs_difference,
                "tail_bound": row.tail_probability,
            }
            for row in rows
        ]
        _emit(config, _to_json(payload))
    if config.figure_path:
        from .figures import convergence_figure

        convergence_figure(rows, config.figure_path)


def _run_algebra_check(config: RunConfig) -> None:
    dims = config.dims if config.dims is not None else DEFAULT_DIMS
    try:
        space = FockSpace(*dims)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    report = algebra_report(space, samples=config.samples, seed=config.seed)
    if (config.output or "json") == "json":
        _emit(config, _to_json(report))
    else:
        lines = ["key,value"] + [f"{k},{_fmt_csv(v)}" for k, v in report.items()]
        _emit(config, "\n".join(lines) + "\n")


_HANDLERS = {
    "evaluate": _run_evaluate,
    "optimize": _run_optimize,
    "sweep": _run_sweep,
    "threshold": _run_threshold,
    "convergence": _run_convergence,
    "algebra-check": _run_algebra_check,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    handler = _HANDLERS.get(config.command)
    try:
        if handler is None:
            raise CliError(f"unknown command {config.command!r}")
        handler(config)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairchsh",
        description="CHSH tests with mode-pair measurements on truncated Fock spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, spec=False, dims=False, angles=False, method=None, output=None):
        if spec:
            p.add_argument("--spec", dest="spec_source", metavar="JSON|PATH",
                           help="state spec as inline JSON or a file path")
        if dims:
            p.add_argument("--dims", metavar="A,B", help="modes kept per side (default 16,16)")
        if angles:
            p.add_argument("--angles", metavar="PRESET|A1,A2,B1,B2",
                           help="angle preset (preset:paper-choice, preset:paper-choice-sq) "
                                "or four radians")
        if method:
            p.add_argument("--method", default=method, help=f"evaluation route (default {method})")
        if output:
            p.add_argument("--output", choices=("csv", "json"),
                           help=f"output format (default {output})")
        p.add_argument("--out", dest="output_path", metavar="PATH",
                       help="write the report to a file instead of stdout")

    p = sub.add_parser("evaluate", help="CHSH at fixed angles")
    add_common(p, spec=True, dims=True, angles=True, method="both", output="json")

    p = sub.add_parser("optimize", help="maximize |CHSH| over the four angles")
    add_common(p, spec=True, dims=True, method="closed_form", output="json")
    p.add_argument("--grid", type=int, default=8, help="seed grid points per angle (default 8)")

    p = sub.add_parser("sweep", help="sweep a family parameter")
    add_common(p, spec=True, dims=True, angles=True, method="closed_form", output="csv")
    p.add_argument("--param", help="swept parameter: eta, w or z_abs")
    p.add_argument("--from", dest="param_from", type=float, help="sweep start")
    p.add_argument("--to", dest="param_to", type=float, help="sweep end")
    p.add_argument("--steps", type=int, help="number of sweep points (>= 2)")
    p.add_argument("--optimize-angles", dest="optimize_each", action="store_true",
                   help="optimize the angles at every point instead of fixing them")
    p.add_argument("--grid", type=int, default=8, help="seed grid for per-point optimization")
    p.add_argument("--figure", dest="figure_path", metavar="PATH",
                   help="also render a PNG of the sweep")

    p = sub.add_parser("threshold", help="locate where the optimal CHSH crosses 2")
    p.add_argument("--family", help="coherent_superposition (in |z|^2), two_mode_squeezed or werner")
    p.add_argument("--lo", type=float, help="bracket lower end")
    p.add_argument("--hi", type=float, help="bracket upper end")
    p.add_argument("--tol", dest="tolerance", type=float, default=1e-10,
                   help="bisection tolerance on the parameter (default 1e-10)")
    p.add_argument("--output", choices=("csv", "json"), help="output format (default json)")
    p.add_argument("--out", dest="output_path", metavar="PATH")

    p = sub.add_parser("convergence", help="matrix-vs-closed-form agreement across cutoffs")
    add_common(p, spec=True, angles=True, output="csv")
    p.add_argument("--dims-list", metavar="D1,D2,...",
                   help="per-side cutoffs to compare, e.g. 4,8,16,32")
    p.add_argument("--figure", dest="figure_path", metavar="PATH",
                   help="also render a PNG of the convergence table")

    p = sub.add_parser("algebra-check", help="operator algebra self checks")
    p.add_argument("--dims", metavar="A,B", help="modes kept per side (default 16,16)")
    p.add_argument("--samples", type=int, default=32, help="random operator samples (default 32)")
    p.add_argument("--seed", type=int, default=0, help="sample seed (default 0)")
    p.add_argument("--output", choices=("csv", "json"), help="output format (default json)")
    p.add_argument("--out", dest="output_path", metavar="PATH")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for name in vars(config):
        if name in ("command", "extra"):
            continue
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(config, name, getattr(args, name))
    if getattr(args, "dims", None):
        config.dims = parse_dims(args.dims)
    if getattr(args, "dims_list", None):
        try:
            config.dims_list = tuple(int(d) for d in args.dims_list.split(","))
        except ValueError:
            raise CliError(f"--dims-list expects integers, got {args.dims_list!r}") from None
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
