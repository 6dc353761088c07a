"""Command-line interface.

Subcommands wrap the library workflows and emit plot-ready CSV/JSON:

    simulate        integrate a fixture or dataset forward in time
    fit             grid-search parameter estimation from a census CSV
    sweep-utility   steady states vs. one language's utility
    sweep-bias      steady states vs. one bias exponent
    sweep-initial   steady states + convergence time vs. one initial fraction
    convergence     convergence time of a single run
    phase           (most popular, kind) over a (beta, ma) grid

Grids on flags use ``lo:hi:count`` (e.g. ``--ma 0:1:101``).  Exit codes:
0 success, 1 runtime failure (e.g. required convergence not reached),
2 usage error.  All commands are deterministic; there is no randomness
anywhere, and worker count (--jobs) never changes output bytes.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, data_io, fitting, integrators
from .integrators import IntegrationError, NotConvergedError, SteadyOptions
from .model import ModelParams

__all__ = ["main", "build_parser"]


class UsageError(ValueError):
    """Bad arguments detected after argparse (exit code 2)."""


def _parse_grid(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{flag}: expected lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"{flag}: invalid number in {text!r}") from None
    if count < 1 or hi < lo:
        raise UsageError(f"{flag}: need hi >= lo and count >= 1 in {text!r}")
    return np.linspace(lo, hi, count)


def _parse_scalar(text: str, flag: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{flag}: invalid number {text!r}") from None


def _load_source(args) -> data_io.Dataset:
    if args.fixture is not None and args.data is not None:
        raise UsageError("give either --fixture or --data, not both")
    if args.fixture is not None:
        fixtures = data_io.bundled_fixtures()
        if args.fixture not in fixtures:
            raise UsageError(
                f"unknown fixture {args.fixture!r}; "
                f"available: {', '.join(sorted(fixtures))}"
            )
        return fixtures[args.fixture].dataset
    if args.data is not None:
        path = Path(args.data)
        if not path.exists():
            raise UsageError(f"dataset file not found: {path}")
        try:
            return data_io.load_dataset(path)
        except data_io.ParseError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError("a data source is required (--fixture or --data)")


def _base_params(args, dataset: data_io.Dataset,
                 need_biases: bool = True) -> ModelParams:
    """Fixture parameters (when given) with CLI overrides applied."""
    if args.fixture is not None:
        base = data_io.bundled_fixtures()[args.fixture].fitted
        beta, ma, utilities = base.beta, base.minority_aversion, base.utilities
    else:
        beta, ma, utilities = None, None, None
    if getattr(args, "beta", None) is not None and ":" not in args.beta:
        beta = _parse_scalar(args.beta, "--beta")
    if getattr(args, "ma", None) is not None and ":" not in args.ma:
        ma = _parse_scalar(args.ma, "--ma")
    if getattr(args, "utilities", None) is not None:
        try:
            utilities = np.asarray(
                [float(v) for v in args.utilities.split(",")]
            )
        except ValueError:
            raise UsageError(
                f"--utilities: invalid vector {args.utilities!r}"
            ) from None
    if not need_biases:
        # grid commands override the biases per cell; only utilities matter
        beta = 0.0 if beta is None else beta
        ma = 0.0 if ma is None else ma
    if beta is None or ma is None or utilities is None:
        raise UsageError(
            "model parameters incomplete: give --fixture, or --beta, --ma "
            "and --utilities alongside --data"
        )
    try:
        return ModelParams(
            beta=beta,
            minority_aversion=ma,
            utilities=utilities,
            language_names=dataset.language_names,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _steady_options(args) -> SteadyOptions:
    kwargs = {}
    if args.step is not None:
        kwargs["step"] = args.step
    if args.t_max is not None:
        kwargs["t_max"] = args.t_max
    if getattr(args, "band_delta", None) is not None:
        kwargs["band_delta"] = args.band_delta
    try:
        return SteadyOptions(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolve_target(target: str, params: ModelParams) -> int:
    if target.isdigit():
        idx = int(target)
        if not (0 <= idx < params.n):
            raise UsageError(f"--target index {idx} out of range for n={params.n}")
        return idx
    try:
        return params.index_of(target)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _segments(points) -> list[str]:
    """Human-readable contiguous outcome segments of a sweep."""
    out = []
    start = prev_label = None
    prev_v = None
    for p in points:
        if p.outcome is None:
            label = "unresolved"
        else:
            name = p.params.language_names[p.outcome.most_popular]
            label = f"{p.outcome.kind} ({name} leads)"
        if label != prev_label:
            if prev_label is not None:
                out.append(f"  [{start:g}, {prev_v:g}]  {prev_label}")
            start, prev_label = p.swept_value, label
        prev_v = p.swept_value
    if prev_label is not None:
        out.append(f"  [{start:g}, {prev_v:g}]  {prev_label}")
    return out


def _cmd_simulate(args) -> int:
    dataset = _load_source(args)
    params = _base_params(args, dataset)
    x0 = dataset.fractions[0]
    t_end = args.t_end
    if t_end is None:
        t_end = float(dataset.years[-1] - dataset.years[0])
    traj = integrators.integrate(
        params, x0, t_end,
        step=args.step if args.step is not None else 0.01,
        record_every=args.record_every,
    )
    data_io.export(traj, args.format, args.out)
    final = traj.states[-1]
    print(f"simulated {t_end:g} years from {dataset.years[0]} "
          f"({len(traj.times)} recorded states) -> {args.out}")
    for name, v in zip(params.language_names, final):
        print(f"  {name}: {v:.4f}")
    return 0


def _cmd_fit(args) -> int:
    dataset = _load_source(args)
    kwargs = {}
    if args.beta is not None:
        grid = _parse_grid(args.beta, "--beta")
        kwargs["beta_range"] = (float(grid[0]), float(grid[-1]))
        kwargs["grid_points_per_axis"] = grid.size
    if args.ma is not None:
        grid = _parse_grid(args.ma, "--ma")
        kwargs["ma_range"] = (float(grid[0]), float(grid[-1]))
        kwargs.setdefault("grid_points_per_axis", grid.size)
    if args.rounds is not None:
        kwargs["rounds"] = args.rounds
    if args.simplex_step is not None:
        kwargs["simplex_step"] = args.simplex_step
    if args.step is not None:
        kwargs["integration_step"] = args.step
    try:
        config = fitting.FitConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = fitting.fit(dataset, config, jobs=args.jobs)
    payload = {
        "schema_version": 1,
        "kind": "fit",
        "dataset": dataset.name,
        "beta": result.params.beta,
        "minority_aversion": result.params.minority_aversion,
        "utilities": {
            name: float(u)
            for name, u in zip(
                result.params.language_names, result.params.utilities
            )
        },
        "error_d": result.error_d,
        "rounds_performed": result.rounds_performed,
        "evaluations": result.evaluations,
    }
    if args.out is not None:
        import json

        Path(args.out).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    print(f"fit of {dataset.name!r}: D = {result.error_d:.6g} after "
          f"{result.rounds_performed} rounds ({result.evaluations} evaluations)")
    print(f"  beta = {result.params.beta:.6g}, "
          f"minority aversion = {result.params.minority_aversion:.6g}")
    for name, u in zip(result.params.language_names, result.params.utilities):
        print(f"  utility {name}: {u:.6g}")
    return 0


def _sweep_command(args, which: str) -> int:
    dataset = _load_source(args)
    params = _base_params(args, dataset)
    x0 = dataset.fractions[0]
    options = _steady_options(args)
    ethr = args.extinction_threshold

    if which == "utility":
        target = _resolve_target(args.target, params)
        values = _parse_grid(args.values, "--values")
        points = analysis.utility_sweep(
            params, x0, target, values, options, ethr, jobs=args.jobs
        )
        what = f"utility of {params.language_names[target]}"
    elif which == "initial":
        target = _resolve_target(args.target, params)
        values = _parse_grid(args.values, "--values")
        points = analysis.initial_fraction_sweep(
            params, x0, target, values, options, ethr, jobs=args.jobs
        )
        what = f"initial fraction of {params.language_names[target]}"
    else:
        beta_is_grid = args.beta is not None and ":" in args.beta
        ma_is_grid = args.ma is not None and ":" in args.ma
        if beta_is_grid == ma_is_grid:
            raise UsageError(
                "sweep-bias: give exactly one of --beta/--ma as lo:hi:count"
            )
        if beta_is_grid:
            axis, values = "beta", _parse_grid(args.beta, "--beta")
        else:
            axis, values = "minority_aversion", _parse_grid(args.ma, "--ma")
        points = analysis.bias_sweep(
            params, x0, axis, values, options, ethr, jobs=args.jobs
        )
        what = axis.replace("_", " ")

    data_io.export(points, args.format, args.out,
                   language_names=params.language_names)
    print(f"swept {what} over {len(points)} values -> {args.out}")
    for line in _segments(points):
        print(line)
    return 0


def _cmd_convergence(args) -> int:
    dataset = _load_source(args)
    params = _base_params(args, dataset)
    x0 = dataset.fractions[0]
    options = _steady_options(args)
    try:
        tau = integrators.convergence_time(params, x0, options)
    except NotConvergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = integrators.find_steady_state(params, x0, options)
    outcome = analysis.classify(result.final_state, args.extinction_threshold)
    lead = params.language_names[outcome.most_popular]
    print(f"convergence time tau = {tau:g} years "
          f"({outcome.kind}, {lead} leads)")
    if args.out is not None:
        import json

        payload = {
            "schema_version": 1,
            "kind": "convergence",
            "tau": tau,
            "converged": result.converged,
            "outcome": outcome.kind,
            "most_popular": lead,
            "final_state": {
                name: float(v)
                for name, v in zip(params.language_names, result.final_state)
            },
        }
        Path(args.out).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.out}")
    return 0


def _cmd_phase(args) -> int:
    dataset = _load_source(args)
    params = _base_params(args, dataset, need_biases=False)
    x0 = dataset.fractions[0]
    options = _steady_options(args)
    beta_grid = _parse_grid(args.beta, "--beta") if args.beta else \
        np.linspace(0.0, 2.0, 101)
    ma_grid = _parse_grid(args.ma, "--ma") if args.ma else \
        np.linspace(0.0, 2.0, 101)
    cells = analysis.phase_diagram(
        params, x0, beta_grid, ma_grid, options,
        args.extinction_threshold, jobs=args.jobs,
    )
    data_io.export(cells, args.format, args.out,
                   language_names=params.language_names)
    counts: dict[str, int] = {}
    for row in cells:
        for c in row:
            if c.kind == "unresolved":
                key = "unresolved"
            else:
                key = f"{c.kind} ({params.language_names[c.most_popular]} leads)"
            counts[key] = counts.get(key, 0) + 1
    total = beta_grid.size * ma_grid.size
    print(f"phase diagram {beta_grid.size}x{ma_grid.size} -> {args.out}")
    for key in sorted(counts):
        print(f"  {counts[key]:6d} / {total}  {key}")
    return 0


def _add_source_args(p: argparse.ArgumentParser):
    p.add_argument("--fixture", help="bundled fixture name")
    p.add_argument("--data", help="path to a dataset CSV")


def _add_param_args(p: argparse.ArgumentParser):
    p.add_argument("--beta", help="majority-preference exponent "
                   "(scalar, or lo:hi:count where a grid is meaningful)")
    p.add_argument("--ma", help="minority-aversion exponent "
                   "(scalar, or lo:hi:count where a grid is meaningful)")
    p.add_argument("--utilities", help="comma-separated utility vector")


def _add_run_args(p: argparse.ArgumentParser, band: bool = True):
    p.add_argument("--step", type=float, help="integration step in years")
    p.add_argument("--t-max", dest="t_max", type=float,
                   help="give up on steady state after this many years")
    if band:
        p.add_argument("--band-delta", dest="band_delta", type=float,
                       help="convergence-time band half-width")
    p.add_argument("--extinction-threshold", dest="extinction_threshold",
                   type=float, default=analysis.DEFAULT_EXTINCTION_THRESHOLD,
                   help="fraction below which a language counts as extinct")


def _add_output_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--out", required=required, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_jobs_arg(p: argparse.ArgumentParser):
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="worker threads for sweeps (never affects results)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="langcompete",
        description="Multi-language competition dynamics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a scenario forward")
    _add_source_args(p)
    _add_param_args(p)
    p.add_argument("--t-end", dest="t_end", type=float,
                   help="years to simulate (default: dataset span)")
    p.add_argument("--step", type=float, help="integration step in years")
    p.add_argument("--record-every", dest="record_every", type=int, default=10,
                   help="record every Nth step")
    _add_output_args(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="estimate parameters from a census CSV")
    _add_source_args(p)
    p.add_argument("--beta", help="beta search grid lo:hi:count")
    p.add_argument("--ma", help="minority-aversion search grid lo:hi:count")
    p.add_argument("--rounds", type=int, help="range-narrowing rounds")
    p.add_argument("--simplex-step", dest="simplex_step", type=float,
                   help="initial utility-lattice spacing")
    p.add_argument("--step", type=float, help="integration step in years")
    _add_jobs_arg(p)
    p.add_argument("--out", help="write the fit result as JSON")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("sweep-utility",
                       help="steady states vs one language's utility")
    _add_source_args(p)
    _add_param_args(p)
    p.add_argument("--target", required=True,
                   help="language to sweep (name or index)")
    p.add_argument("--values", required=True, help="sweep grid lo:hi:count")
    _add_run_args(p)
    _add_output_args(p)
    _add_jobs_arg(p)
    p.set_defaults(func=lambda a: _sweep_command(a, "utility"))

    p = sub.add_parser("sweep-bias", help="steady states vs one bias exponent")
    _add_source_args(p)
    _add_param_args(p)
    _add_run_args(p)
    _add_output_args(p)
    _add_jobs_arg(p)
    p.set_defaults(func=lambda a: _sweep_command(a, "bias"))

    p = sub.add_parser("sweep-initial",
                       help="steady states and tau vs one initial fraction")
    _add_source_args(p)
    _add_param_args(p)
    p.add_argument("--target", required=True,
                   help="language to sweep (name or index)")
    p.add_argument("--values", required=True, help="sweep grid lo:hi:count")
    _add_run_args(p)
    _add_output_args(p)
    _add_jobs_arg(p)
    p.set_defaults(func=lambda a: _sweep_command(a, "initial"))

    p = sub.add_parser("convergence", help="convergence time of one run")
    _add_source_args(p)
    _add_param_args(p)
    _add_run_args(p)
    p.add_argument("--out", help="write a JSON summary")
    p.set_defaults(func=_cmd_convergence)

    p = sub.add_parser("phase", help="phase diagram over (beta, ma)")
    _add_source_args(p)
    p.add_argument("--beta", help="beta grid lo:hi:count (default 0:2:101)")
    p.add_argument("--ma", help="ma grid lo:hi:count (default 0:2:101)")
    p.add_argument("--utilities", help="comma-separated utility vector")
    _add_run_args(p, band=False)
    _add_output_args(p)
    _add_jobs_arg(p)
    p.set_defaults(func=_cmd_phase)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except NotConvergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # validation failures from the library surface as usage errors
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
