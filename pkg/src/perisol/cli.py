""" Perisol
    CLI entrypoint

    No loggers are defined here, we'll only use click.secho()
    for basic text output (on stderr, stdout is kept for JSON and CSV).
    Processing and logging has to be 'contained' in other parts of the app.
"""

import dataclasses
import pathlib

import click
import numpy as np
import yaml

from perisol import impulse_algebra
from perisol.criteria import make_checker
from perisol.criteria.base import TheoremId
from perisol.criteria.search import search
from perisol.exceptions import (
    CriterionPreconditionError,
    NumericalError,
    PerisolError,
    UnsupportedCaseError,
)
from perisol.model.system import load_system, save_system
from perisol.phi_operator import solve_fixed_point
from perisol.pipeline import (
    CERTIFIED_COMPUTED,
    RunReport,
    fixed_point_summary,
    pipeline,
    simulation_summary,
)
from perisol.simulator import integrate
from perisol.utils.config import load_settings
from perisol.utils.logging import get_perisol_logger
from perisol.utils.report import (
    bounds_frame,
    conditions_frame,
    dump_json,
    long_format,
    solution_frame,
    to_csv_text,
    write_csv,
    write_json,
)
from perisol.zoo import ZOO, make_entry

# pylint: disable=too-many-arguments

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def _say(message, **style):
    click.secho(message, err=True, **style)


def _floats(ctx, param, value):  # pylint: disable=unused-argument
    """Comma separated floats"""
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma separated numbers, got {value}") from None


def _input_error(ctx, exc):
    """Report an input error (tag included for hypotheses) and exit with status 2"""
    _say(f"[!] Invalid input : {exc}", fg="red")
    ctx.exit(EXIT_INPUT)


def load_source(source: str, eta=None):
    """System from a YAML path or from a zoo entry given as zoo:ID"""

    if source.startswith("zoo:"):
        params = {}
        if eta is not None:
            params["eta"] = tuple(eta) if len(eta) > 1 else eta[0]
        try:
            return make_entry(source[len("zoo:") :], **params).spec
        except TypeError as exc:
            raise ValueError(f"{source} does not accept these parameters ({exc})") from exc

    if eta is not None:
        raise ValueError("--eta only applies to zoo entries")
    return load_system(source)


def _spec(ctx, source, eta=None):
    try:
        return load_source(source, eta)
    except (ValueError, OSError) as exc:
        return _input_error(ctx, exc)


def _settings(ctx, **overrides):
    values = {key: value for key, value in overrides.items() if value is not None}
    return dataclasses.replace(ctx.obj["settings"], **values)


def _emit(ctx, run: RunReport, as_json: bool, out: str, name: str):
    data = run.to_dict(ctx.obj["deterministic"])
    if as_json:
        click.echo(dump_json(data))
    if out:
        write_json(data, pathlib.Path(out) / f"{name}.json")


source_argument = click.argument("source")
eta_option = click.option(
    "--eta", callback=_floats, default=None, help="Impulse sizes of a zoo entry, 'eta1,eta2,...'"
)
json_option = click.option("--json", "as_json", is_flag=True, help="Print the run report as JSON")
out_option = click.option(
    "-o",
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory receiving JSON and CSV outputs",
)
grid_option = click.option(
    "--grid", type=click.IntRange(min=16), default=None, help="Evaluation grid points"
)
plot_option = click.option(
    "--emit-plot-data", is_flag=True, help="Also write long format CSV (t, component, value, side)"
)


@click.group()
@click.pass_context
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose mode")
@click.option(
    "-s",
    "--settings",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Path to a run settings file (YAML)",
)
@click.option(
    "--deterministic/--timed",
    default=True,
    help="Leave the wall time out of reports, so that identical inputs give identical files",
)
def cli(ctx, verbose, settings, deterministic):
    """Perisol CLI"""
    _say("## Perisol ##", fg="cyan")
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    ctx.obj["deterministic"] = deterministic
    get_perisol_logger(verbose=verbose)
    try:
        ctx.obj["settings"] = load_settings(settings)
    except ValueError as exc:
        _input_error(ctx, exc)


# VALIDATE
@cli.command("validate")
@click.pass_context
@source_argument
@eta_option
def run_validate(ctx, source, eta):
    """Check a system description and its standing hypotheses"""

    spec = _spec(ctx, source, eta)
    kinds = ", ".join(kind.value for kind in spec.kinds())
    _say(
        f"[~] {spec.name or source} : n={spec.n}, omega={spec.omega:.12g}, "
        f"{spec.p} impulse(s) per period, {kinds}",
        fg="green",
    )
    _say("[~] Hypotheses hold.", fg="green")


# BOUNDS
@cli.command("bounds")
@click.pass_context
@source_argument
@eta_option
@json_option
@out_option
def run_bounds(ctx, source, eta, as_json, out):
    """Print the impulse bounds table of a system (CSV, or JSON)"""

    spec = _spec(ctx, source, eta)
    try:
        frame = bounds_frame(impulse_algebra.bounds(spec))
    except PerisolError as exc:
        _input_error(ctx, exc)

    if as_json:
        click.echo(dump_json(frame.to_dict(orient="records")))
    else:
        click.echo(to_csv_text(frame), nl=False)
    if out:
        write_csv(frame, pathlib.Path(out) / "bounds.csv")


# CERTIFY
@cli.command("certify")
@click.pass_context
@source_argument
@click.option(
    "-t",
    "--theorem",
    required=True,
    type=click.Choice([member.value for member in TheoremId]),
    help="Criterion to check",
)
@click.option("--v", "v", callback=_floats, default=None, help="Scaling vector 'v1,v2,...'")
@click.option("--search-v", is_flag=True, help="Search the scaling vector with maximal margin")
@click.option(
    "--eps",
    type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
    default=None,
    help="Single envelope parameter instead of the sweep",
)
@click.option(
    "--branch",
    type=click.Choice(["kernel", "pointwise", "average"]),
    default=None,
    help="Restrict bounded criteria to one branch",
)
@eta_option
@grid_option
@json_option
@out_option
def run_certify(ctx, source, theorem, v, search_v, eps, branch, eta, grid, as_json, out):
    """Evaluate one existence criterion"""

    spec = _spec(ctx, source, eta)
    settings = _settings(ctx, grid_points=grid)
    eps_sweep = (eps,) if eps is not None else settings.eps_sweep
    checker = make_checker(theorem, points=settings.grid_points, eps_sweep=eps_sweep)
    options = {} if branch is None else {"branch": branch}

    _say(f"[~] Checking {theorem} on {spec.name or source}...", fg="cyan")
    try:
        if search_v:
            _, report = search(spec, checker, **options)
        else:
            report = checker.check(spec, None if v is None else np.array(v), **options)
    except (CriterionPreconditionError, UnsupportedCaseError, ValueError) as exc:
        _input_error(ctx, exc)

    run = RunReport(
        spec_digest=spec.digest(),
        subcommand="certify",
        inputs={
            "source": source,
            "theorem": theorem,
            "v": v,
            "search_v": search_v,
            "eps": eps,
            "branch": branch,
            "grid_points": settings.grid_points,
        },
        criteria=[report],
        verdict="pass" if report.verdict else "fail",
        notes=list(report.notes),
    )

    if not as_json:
        click.echo(conditions_frame(report).to_string(index=False))
    color = "green" if report.verdict else "red"
    _say(f"[~] {theorem} : {run.verdict} (margin {report.margin:.6g})", fg=color)
    _emit(ctx, run, as_json, out, "certify")
    if out:
        write_csv(conditions_frame(report), pathlib.Path(out) / "margins.csv")
    ctx.exit(EXIT_OK if report.verdict else EXIT_FAILED)


# SOLVE
@cli.command("solve")
@click.pass_context
@source_argument
@eta_option
@grid_option
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--damping", type=click.FloatRange(min=0, max=1, min_open=True), default=None)
@click.option("--max-iter", type=click.IntRange(min=1), default=None)
@click.option("--initial", type=float, default=None, help="Constant initial iterate")
@json_option
@out_option
@plot_option
def run_solve(
    ctx, source, eta, grid, tol, damping, max_iter, initial, as_json, out, emit_plot_data
):
    """Compute a positive periodic solution by the damped fixed point iteration"""

    spec = _spec(ctx, source, eta)
    settings = _settings(ctx, grid_points=grid, tolerance=tol, damping=damping, max_iter=max_iter)

    _say(f"[~] Solving {spec.name or source}...", fg="cyan")
    try:
        result = solve_fixed_point(
            spec,
            initial=initial,
            damping=settings.damping,
            tol=settings.tolerance,
            max_iter=settings.max_iter,
            points=settings.grid_points,
        )
    except NumericalError as exc:
        _say(f"[!] Iteration failed : {exc}", fg="red")
        ctx.exit(EXIT_FAILED)

    run = RunReport(
        spec_digest=spec.digest(),
        subcommand="solve",
        inputs={"source": source, "settings": settings.to_dict(), "initial": initial},
        fixed_point=fixed_point_summary(spec, result),
        verdict="converged" if result.converged else "unconverged",
    )

    color = "green" if result.converged else "red"
    _say(
        f"[~] {run.verdict} after {result.iterations} iterations "
        f"(residual {result.residual:.3e}, floor {result.positivity_floor:.6g})",
        fg=color,
    )
    _emit(ctx, run, as_json, out, "solve")
    if out:
        frame = solution_frame(result.solution)
        write_csv(frame, pathlib.Path(out) / "solution.csv")
        if emit_plot_data:
            write_csv(long_format(frame), pathlib.Path(out) / "solution_long.csv")
    ctx.exit(EXIT_OK if result.converged else EXIT_FAILED)


# SIMULATE
@cli.command("simulate")
@click.pass_context
@source_argument
@eta_option
@click.option("--t-end", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--max-step", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--history", type=click.FloatRange(min=0), default=1.0, help="Constant history")
@click.option("--samples", type=click.IntRange(min=2), default=2001, help="Dense samples")
@json_option
@out_option
@plot_option
def run_simulate(
    ctx, source, eta, t_end, max_step, history, samples, as_json, out, emit_plot_data
):
    """Integrate the system from a constant history"""

    spec = _spec(ctx, source, eta)
    settings = _settings(ctx, t_end=t_end, max_step=max_step)

    _say(f"[~] Simulating {spec.name or source} up to t={settings.t_end}...", fg="cyan")
    try:
        traj = integrate(spec, np.full(spec.n, history), settings.t_end, settings.max_step)
    except NumericalError as exc:
        _say(f"[!] Simulation failed : {exc}", fg="red")
        ctx.exit(EXIT_FAILED)

    summary = simulation_summary(spec, traj, settings.max_step)
    run = RunReport(
        spec_digest=spec.digest(),
        subcommand="simulate",
        inputs={"source": source, "history": history, "settings": settings.to_dict()},
        simulation=summary,
    )

    _say(f"[~] Long run floor : {summary['long_run_floor']}", fg="green")
    _emit(ctx, run, as_json, out, "simulate")
    if out:
        frame = traj.sample(0.0, traj.t_end, samples)
        write_csv(frame, pathlib.Path(out) / "trajectory.csv")
        write_csv(traj.events_frame(), pathlib.Path(out) / "events.csv")
        if emit_plot_data:
            write_csv(long_format(frame), pathlib.Path(out) / "trajectory_long.csv")


# PIPELINE
@cli.command("report")
@click.pass_context
@source_argument
@eta_option
@click.option(
    "-t",
    "--theorem",
    multiple=True,
    type=click.Choice([member.value for member in TheoremId]),
    help="Criteria to try (default : chosen from the nonlinearity kinds)",
)
@grid_option
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--t-end", type=click.FloatRange(min=0, min_open=True), default=None)
@json_option
@out_option
def run_report(ctx, source, eta, theorem, grid, tol, t_end, as_json, out):
    """Certify, solve and cross-check by simulation"""

    spec = _spec(ctx, source, eta)
    settings = _settings(ctx, grid_points=grid, tolerance=tol, t_end=t_end)

    _say(f"[~] Running the pipeline on {spec.name or source}...", fg="cyan")
    try:
        run = pipeline(spec, settings, theorem_ids=list(theorem) or None)
    except PerisolError as exc:
        _say(f"[!] Stage {getattr(exc, 'stage', '?')} failed : {exc}", fg="red")
        ctx.exit(EXIT_INPUT if isinstance(exc, ValueError) else EXIT_FAILED)

    run.inputs["source"] = source
    color = "green" if run.verdict == CERTIFIED_COMPUTED else "yellow"
    _say(f"[~] Verdict : {run.verdict}", fg=color)
    for note in run.notes:
        _say(f"    - {note}")
    _emit(ctx, run, as_json, out, "report")
    ctx.exit(EXIT_OK if run.verdict == CERTIFIED_COMPUTED else EXIT_FAILED)


cli.add_command(run_report, "pipeline")


# ZOO
@cli.group("zoo")
def zoo():
    """Built-in systems"""


@zoo.command("list")
def zoo_list():
    """List the built-in systems"""
    for entry_id, constructor in ZOO.items():
        summary = (constructor.__doc__ or "").strip().splitlines()[0]
        click.echo(f"{entry_id}\t{summary}")


@zoo.command("emit")
@click.pass_context
@click.argument("entry_id", type=click.Choice(list(ZOO)))
@eta_option
@click.option(
    "-o", "--out", type=click.Path(dir_okay=False), default=None, help="Output YAML file"
)
def zoo_emit(ctx, entry_id, eta, out):
    """Write the system description of a built-in system"""

    spec = _spec(ctx, f"zoo:{entry_id}", eta)
    if out:
        save_system(spec, out)
        _say(f"[~] {entry_id} written to {out}", fg="green")
    else:
        click.echo(yaml.safe_dump(spec.to_dict(), sort_keys=False), nl=False)
