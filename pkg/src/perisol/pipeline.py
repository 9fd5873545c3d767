""" Perisol
    Certify, solve and simulate in one run, and the run report gathering the outcome
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from perisol import __version__, impulse_algebra
from perisol.criteria import make_checker
from perisol.criteria.base import TheoremId
from perisol.criteria.search import search
from perisol.exceptions import (
    CriterionPreconditionError,
    NumericalError,
    PerisolError,
    UnsupportedCaseError,
)
from perisol.model.nonlinearity import NonlinearityKind
from perisol.phi_operator import jump_identity_check, solve_fixed_point
from perisol.simulator import (
    floor_trend,
    integrate,
    long_run_floor,
    periodicity_residual,
    sup_deviation,
)
from perisol.utils.config import RunSettings
from perisol.utils.logging import get_perisol_logger
from perisol.utils.report import RunReportSchema, dump_json

# pylint: disable=logging-fstring-interpolation,too-many-instance-attributes

CERTIFIED_COMPUTED = "certified+computed"
CERTIFIED_ONLY = "certified only"
NOT_CERTIFIED = "not certified"

CROSS_CHECK_PERIODS = 4
EXTINCTION_FLOOR = 2e-2

CANDIDATES = {
    NonlinearityKind.HEMATOPOIESIS_DISTRIBUTED: (TheoremId.T4_1_HEMATOPOIESIS,),
    NonlinearityKind.HEMATOPOIESIS_DISCRETE: (TheoremId.T4_1_HEMATOPOIESIS,),
    NonlinearityKind.NICHOLSON_DISTRIBUTED: (
        TheoremId.T_N1_NICHOLSON,
        TheoremId.T3_2_SUBLINEAR,
    ),
    NonlinearityKind.MACKEY_GLASS_DISTRIBUTED: (
        TheoremId.T3_4_BOUNDED,
        TheoremId.T3_2_SUBLINEAR,
    ),
    NonlinearityKind.NICHOLSON_MIXED: (TheoremId.T4_4_MIXED,),
    NonlinearityKind.NICHOLSON_DISCRETE: (
        TheoremId.T4_2_PLANAR,
        TheoremId.T3_3_AVERAGE,
        TheoremId.T3_3_POINTWISE,
        TheoremId.T3_2_SUBLINEAR,
        TheoremId.T3_4_BOUNDED,
    ),
    NonlinearityKind.CUSTOM_TABLE: (TheoremId.T3_2_SUBLINEAR, TheoremId.T3_6_LIMITS),
}


@dataclass
class RunReport:
    """Everything one command produced, serialised through RunReportSchema"""

    tool_version: str = __version__
    spec_digest: str = ""
    subcommand: str = ""
    inputs: dict = field(default_factory=dict)
    criteria: list = field(default_factory=list)
    fixed_point: dict = None
    simulation: dict = None
    verdict: str = None
    notes: list = field(default_factory=list)
    wall_time: float = None

    def to_dict(self, deterministic: bool = True):
        """Export report to dict format, without wall time when deterministic"""
        data = RunReportSchema().dump(self)
        if deterministic:
            data.pop("wall_time", None)
        return data

    def to_json(self, deterministic: bool = True) -> str:
        """Stable JSON text of the report"""
        return dump_json(self.to_dict(deterministic))

    @property
    def certified(self) -> bool:
        """True when one criterion passed"""
        return any(report.verdict for report in self.criteria)


def candidate_criteria(spec):
    """Criteria worth trying on a system, most specific first"""

    ids = []
    for kind in spec.kinds():
        for theorem_id in CANDIDATES[kind]:
            if theorem_id not in ids:
                ids.append(theorem_id)
    if len(spec.kinds()) > 1:
        ids = [theorem_id for theorem_id in ids if theorem_id is TheoremId.T3_2_SUBLINEAR]
    return ids or [TheoremId.T3_2_SUBLINEAR]


@contextmanager
def stage(name: str, log):
    """Tag any perisol error raised inside with the stage it came from"""
    log.debug(f"Pipeline stage {name} started")
    try:
        yield
    except PerisolError as exc:
        log.error(f"Pipeline stage {name} failed : {exc}")
        exc.stage = name
        raise


def fixed_point_summary(spec, result) -> dict:
    """Scalar outcome of the iteration, with the jump identity of the returned iterate"""
    summary = result.summary()
    summary["jump_identity"] = (
        jump_identity_check(spec, result.solution) if spec.is_impulsive() else 0.0
    )
    return summary


def simulation_summary(spec, traj, max_step: float, solution=None) -> dict:
    """Periodicity residual, floors and deviation from a computed solution"""

    omega = spec.omega
    residual = None
    if traj.t_end >= 2 * omega:
        residual = periodicity_residual(traj, omega, traj.t_end - 2 * omega)
    deviation = None
    if solution is not None:
        deviation = sup_deviation(traj, solution, 0.0, traj.t_end)
    window = min(omega, traj.t_end)
    return {
        "t_end": traj.t_end,
        "max_step": max_step,
        "periodicity_residual": residual,
        "long_run_floor": [float(value) for value in long_run_floor(traj, window)],
        "events": len(traj.events),
        "sup_deviation": deviation,
        "floor_trend": floor_trend(traj),
    }


def certify(spec, settings: RunSettings, log, theorem_ids=None):
    """Search every candidate criterion, stop at the first pass"""

    reports, notes = [], []
    for theorem_id in theorem_ids or candidate_criteria(spec):
        checker = make_checker(
            theorem_id, points=settings.grid_points, eps_sweep=settings.eps_sweep
        )
        checker.set_logger(log)
        try:
            _, report = search(spec, checker)
        except (CriterionPreconditionError, UnsupportedCaseError) as exc:
            notes.append(f"{TheoremId(theorem_id).value} not applicable : {exc}")
            continue
        reports.append(report)
        if report.verdict:
            break
    return reports, notes


def pipeline(spec, settings: RunSettings = None, theorem_ids=None) -> RunReport:
    """bounds -> best criterion -> fixed point -> simulation cross-check

    The verdict is "certified+computed" when a criterion passes and the iteration reaches
    a positive solution, "certified only" when only the criterion does and "not certified"
    otherwise. Without a certificate, the system is simulated from a constant history over
    settings.t_end to document extinction.
    """

    log = get_perisol_logger()
    settings = settings or RunSettings()
    started = time.perf_counter()
    report = RunReport(spec_digest=spec.digest(), subcommand="pipeline")
    report.inputs = {"system": spec.name, "settings": settings.to_dict()}

    with stage("bounds", log):
        bounds = impulse_algebra.bounds(spec)
    log.debug(f"Bounds of {spec.name} : {[bound.to_dict() for bound in bounds]}")

    with stage("certify", log):
        report.criteria, notes = certify(spec, settings, log, theorem_ids)
    report.notes.extend(notes)

    result = None
    with stage("solve", log):
        try:
            result = solve_fixed_point(
                spec,
                damping=settings.damping,
                tol=settings.tolerance,
                max_iter=settings.max_iter,
                points=settings.grid_points,
            )
        except NumericalError as exc:
            report.notes.append(f"fixed point iteration failed : {exc}")
    if result is not None:
        report.fixed_point = fixed_point_summary(spec, result)

    computed = result is not None and result.converged
    with stage("simulate", log):
        try:
            if computed:
                traj = integrate(
                    spec,
                    result.solution,
                    CROSS_CHECK_PERIODS * spec.omega,
                    max_step=settings.max_step,
                )
                report.simulation = simulation_summary(
                    spec, traj, settings.max_step, result.solution
                )
            elif not report.certified:
                traj = integrate(spec, np.ones(spec.n), settings.t_end, max_step=settings.max_step)
                report.simulation = simulation_summary(spec, traj, settings.max_step)
        except NumericalError as exc:
            report.notes.append(f"simulation failed : {exc}")
    if report.certified:
        report.verdict = CERTIFIED_COMPUTED if computed else CERTIFIED_ONLY
        if not computed:
            report.notes.append("existence certified, computation inconclusive")
    else:
        report.verdict = NOT_CERTIFIED
        if report.simulation is not None and not computed:
            trend = report.simulation["floor_trend"]
            if all(b < a for a, b in zip(trend, trend[1:])) and trend[-1] < EXTINCTION_FLOOR:
                report.notes.append("trajectories from a constant history decay (extinction)")

    report.wall_time = time.perf_counter() - started
    log.info(f"Pipeline on {spec.name or 'system'} : {report.verdict}")
    return report
