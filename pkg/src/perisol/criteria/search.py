""" Perisol
    Search of a positive scaling vector v satisfying a criterion
"""

import itertools

import numpy as np

from perisol.exceptions import CriterionPreconditionError
from perisol.utils.logging import get_perisol_logger

# pylint: disable=logging-fstring-interpolation

AXIS_POINTS = 21
LOG_RANGE = (-3.0, 3.0)
REFINE_FACTOR = 2.0


def _scan(spec, checker, candidates, options, log):
    """Best report over candidate tails (v_2, ..., v_n), v_1 = 1"""

    best, error = None, None
    for tail in candidates:
        v = np.concatenate(([1.0], tail))
        try:
            report = checker.check(spec, v, **options)
        except CriterionPreconditionError as exc:
            # gamma ratio denominators depend on v
            error = exc
            continue
        if best is None or report.rank() > best.rank():
            best = report

    if best is None and error is not None:
        log.debug(f"No admissible scaling vector : {error}")
        raise error
    return best


def search(spec, checker, **options):
    """(v, report) where v is the passing scaling vector with maximal margin, or None

    v_1 is fixed to 1, the other components run over a logarithmic grid of AXIS_POINTS
    values in 10^-3..10^3, then over a window of factor REFINE_FACTOR around the best
    candidate. The report is the best one found, passing or not.
    """

    log = get_perisol_logger()

    if spec.n == 1:
        report = checker.check(spec, np.ones(1), **options)
        return (np.ones(1) if report.verdict else None), report

    axis = np.logspace(LOG_RANGE[0], LOG_RANGE[1], AXIS_POINTS)
    best = _scan(spec, checker, itertools.product(axis, repeat=spec.n - 1), options, log)

    center = np.array(best.v_witness[1:])
    axes = [
        np.logspace(
            np.log10(value / REFINE_FACTOR), np.log10(value * REFINE_FACTOR), AXIS_POINTS
        )
        for value in center
    ]
    refined = _scan(spec, checker, itertools.product(*axes), options, log)
    if refined is not None and refined.rank() > best.rank():
        best = refined

    log.info(
        f"v-search {checker.theorem_id.value} on {spec.name or 'system'} : "
        f"verdict={best.verdict} v={best.v_witness} margin={best.margin:.3e}"
    )
    if not best.verdict:
        return None, best
    return np.array(best.v_witness), best


def search_v(spec, checker, **options):
    """Passing scaling vector with maximal margin, or None"""
    return search(spec, checker, **options)[0]
