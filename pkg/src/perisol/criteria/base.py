""" Perisol
    Base criterion checker, report types and inequality tolerances
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from perisol import impulse_algebra
from perisol.criteria.envelopes import envelope_family
from perisol.criteria.kernel import KernelEvaluator, Weight, refine_extremum
from perisol.exceptions import CriterionPreconditionError, ModelError
from perisol.model.grid import DEFAULT_POINTS

# pylint: disable=logging-fstring-interpolation

EQUALITY_TOLERANCE = 1e-9
STRICT_SLACK = 1e-9
NOT_IDENTICAL_FLOOR = -1e-12
DEFAULT_EPS_SWEEP = (0.2, 0.1, 0.05, 0.01, 0.001)


class TheoremId(Enum):
    """Existence criteria"""

    T3_1 = "T3_1"
    T3_2_SUBLINEAR = "T3_2_sublinear"
    T3_2_SUPERLINEAR = "T3_2_superlinear"
    T3_3_POINTWISE = "T3_3_pointwise"
    T3_3_AVERAGE = "T3_3_average"
    C3_1_NONIMPULSIVE = "C3_1_nonimpulsive"
    C_SCALAR = "C_scalar"
    T3_6_LIMITS = "T3_6_limits"
    T3_4_BOUNDED = "T3_4_bounded"
    C3_4_GAMMA = "C3_4_gamma"
    T4_1_HEMATOPOIESIS = "T4_1_hematopoiesis"
    T_N1_NICHOLSON = "T_N1_nicholson"
    T4_4_MIXED = "T4_4_mixed"
    T4_2_PLANAR = "T4_2_planar"


@dataclass
class ConditionResult:
    """One evaluated inequality  value <relation> bound  for one component

    `slack` is positive when the inequality holds with room to spare, `at` is the time
    where the extremum was reached (pointwise and kernel conditions only).
    """

    name: str
    component: int
    value: float
    bound: float
    relation: str
    slack: float
    passed: bool
    at: float = None
    branch: str = ""

    def to_dict(self):
        """Export condition to dict format"""
        return {
            "name": self.name,
            "component": self.component,
            "value": self.value,
            "bound": self.bound,
            "relation": self.relation,
            "slack": self.slack,
            "passed": self.passed,
            "at": self.at,
            "branch": self.branch,
        }


@dataclass
class CriterionReport:
    """Outcome of one criterion on one system and one scaling vector"""

    theorem_id: TheoremId
    v_witness: list
    conditions: list
    verdict: bool
    margin: float
    grid_points: int = DEFAULT_POINTS
    eps: float = None
    branches: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @classmethod
    def from_conditions(cls, theorem_id, v, conditions, grid_points, notes=None):
        """Group conditions by branch: a branch passes when all of its conditions pass,
        the criterion passes when one branch does"""

        grouped = {}
        for condition in conditions:
            grouped.setdefault(condition.branch, []).append(condition)

        branches = {name: all(c.passed for c in group) for name, group in grouped.items()}
        margins = {name: min(c.slack for c in group) for name, group in grouped.items()}
        passing = [name for name, passed in branches.items() if passed]
        candidates = passing or list(margins)

        return cls(
            theorem_id=TheoremId(theorem_id),
            v_witness=None if v is None else [float(value) for value in v],
            conditions=list(conditions),
            verdict=bool(passing),
            margin=max(margins[name] for name in candidates) if candidates else float("nan"),
            grid_points=grid_points,
            branches=branches,
            notes=list(notes or []),
        )

    def failed(self):
        """Conditions that do not hold"""
        return [condition for condition in self.conditions if not condition.passed]

    def rank(self):
        """Sort key : passing reports first, then larger margins"""
        margin = self.margin if np.isfinite(self.margin) else -np.inf
        return (self.verdict, margin)

    def to_dict(self):
        """Export report to dict format"""
        return {
            "theorem_id": self.theorem_id.value,
            "v_witness": self.v_witness,
            "conditions": [condition.to_dict() for condition in self.conditions],
            "verdict": self.verdict,
            "margin": self.margin,
            "grid_points": self.grid_points,
            "eps": self.eps,
            "branches": dict(self.branches),
            "notes": list(self.notes),
        }


def _condition(name, component, value, bound, relation, slack, passed, at, branch):
    return ConditionResult(
        name=name,
        component=component,
        value=float(value),
        bound=float(bound),
        relation=relation,
        slack=float(slack),
        passed=bool(passed),
        at=None if at is None else float(at),
        branch=branch,
    )


def at_least(name, component, value, bound, at=None, branch=""):
    """value >= bound, equality accepted within EQUALITY_TOLERANCE"""
    slack = value - bound
    return _condition(
        name, component, value, bound, ">=", slack, slack >= -EQUALITY_TOLERANCE, at, branch
    )


def at_most(name, component, value, bound, at=None, branch=""):
    """value <= bound, equality accepted within EQUALITY_TOLERANCE"""
    slack = bound - value
    return _condition(
        name, component, value, bound, "<=", slack, slack >= -EQUALITY_TOLERANCE, at, branch
    )


def greater(name, component, value, bound, at=None, branch=""):
    """value > bound by more than STRICT_SLACK"""
    slack = value - bound
    return _condition(name, component, value, bound, ">", slack, slack > STRICT_SLACK, at, branch)


def less(name, component, value, bound, at=None, branch=""):
    """value < bound by more than STRICT_SLACK"""
    slack = bound - value
    return _condition(name, component, value, bound, "<", slack, slack > STRICT_SLACK, at, branch)


def pointwise_slack(func, nodes):
    """(min, argmin, max) of a slack function t -> rhs(t) - lhs(t) over one period

    The minimum is refined around its grid node when the sampled values are finite.
    """

    values = np.asarray(func(nodes), dtype=float)
    high = float(np.max(values))
    if np.all(np.isfinite(values)):
        low, at = refine_extremum(func, nodes, values, "min")
    else:
        index = int(np.argmin(values))
        low, at = float(values[index]), float(nodes[index])
    return low, at, high


def everywhere(name, component, func, nodes, strict=False, branch=""):
    """func(t) >= 0 (or > 0 when strict) at every t"""
    low, at, _ = pointwise_slack(func, nodes)
    check = greater if strict else at_least
    return check(name, component, low, 0.0, at=at, branch=branch)


def not_identically(name, component, func, nodes, branch=""):
    """func(t) >= 0 everywhere and > 0 somewhere (the relation written <= with a
    'not identical' mark)

    The slack is the minimum when some node is strictly positive, otherwise it is the
    shortfall of the maximum.
    """

    low, at, high = pointwise_slack(func, nodes)
    strict = high > STRICT_SLACK
    slack = low if strict else high - STRICT_SLACK
    passed = low >= NOT_IDENTICAL_FLOOR and strict
    return _condition(name, component, low, 0.0, ">=!=", slack, passed, at, branch)


class CriterionChecker(ABC):
    """Interface shared by every existence criterion

    Kernel evaluators and impulse bounds are cached per system, so one checker can be
    called repeatedly (v-search, eps-sweep) on the same system.
    """

    theorem_id = None

    def __init__(self, points: int = DEFAULT_POINTS, eps_sweep=DEFAULT_EPS_SWEEP):
        """Define a custom local logger, just in case none is provided later on"""
        self.log = logging.getLogger(__name__)
        self.log.setLevel(logging.INFO)
        self.points = points
        self.eps_sweep = tuple(eps_sweep)
        self._cache = {}

    def set_logger(self, logger):
        """Set local logger to an externally provided one"""
        self.log = logger

    def _context(self, spec):
        key = id(spec)
        if key not in self._cache:
            self._cache[key] = (
                spec,
                KernelEvaluator(spec, self.points),
                impulse_algebra.bounds(spec),
            )
        return self._cache[key]

    def evaluator(self, spec) -> KernelEvaluator:
        """Cached kernel evaluator of a system"""
        return self._context(spec)[1]

    def bounds(self, spec):
        """Cached ImpulseBounds of a system"""
        return self._context(spec)[2]

    def precondition(self, spec):
        """Raise CriterionPreconditionError when the system is outside the criterion scope"""

    def check(self, spec, v=None, **options) -> CriterionReport:
        """Evaluate the criterion for the scaling vector v (all ones by default)"""

        v = np.ones(spec.n) if v is None else np.asarray(v, dtype=float)
        if v.shape != (spec.n,) or np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise ModelError(f"Scaling vector must hold {spec.n} positive values")

        self.precondition(spec)
        report = self.evaluate(spec, v, **options)
        self.log.debug(
            f"{self.theorem_id.value} on {spec.name or 'system'} with v={list(v)} : "
            f"verdict={report.verdict} margin={report.margin:.3e}"
        )
        return report

    @abstractmethod
    def evaluate(self, spec, v, **options) -> CriterionReport:
        """Compute every condition of the criterion"""

    def report(self, v, conditions, notes=None) -> CriterionReport:
        """Assemble a report for this checker"""
        return CriterionReport.from_conditions(
            self.theorem_id, v, conditions, self.points, notes=notes
        )

    def require_kinds(self, spec, kinds):
        """Every component must use one of `kinds`"""
        for i, descriptor in enumerate(spec.nonlinearity):
            if descriptor.kind not in kinds:
                raise CriterionPreconditionError(
                    f"{self.theorem_id.value} does not apply to component {i + 1} of kind "
                    f"{descriptor.kind.value}"
                )

    def require_nonimpulsive(self, spec):
        """The system must have no impulse"""
        if spec.is_impulsive():
            raise CriterionPreconditionError(
                f"{self.theorem_id.value} only applies to systems without impulses"
            )


class EnvelopeChecker(CriterionChecker):
    """Criteria stated with an envelope pair (b1, b2)

    Declared envelopes (argument or system) are used as they are. Otherwise the
    eps-parameterized family of the nonlinearity kind is swept and the best report kept.
    """

    sweep = True

    def evaluate(self, spec, v, envelopes=None, **options):
        envelopes = envelopes if envelopes is not None else spec.envelopes
        if envelopes is not None:
            return self.evaluate_envelopes(spec, envelopes, v, **options)

        if not self.sweep:
            raise CriterionPreconditionError(
                f"{self.theorem_id.value} needs declared envelopes (b1, b2)"
            )

        best = None
        for eps in options.pop("eps_sweep", None) or self.eps_sweep:
            family = envelope_family(spec, self.evaluator(spec), self.bounds(spec), eps)
            report = self.evaluate_envelopes(spec, family, v, **options)
            report.eps = float(eps)
            if best is None or report.rank() > best.rank():
                best = report
        return best

    @abstractmethod
    def evaluate_envelopes(self, spec, envelopes, v, **options) -> CriterionReport:
        """Evaluate the conditions for one envelope pair"""

    @staticmethod
    def weights(envelopes, i):
        """(b1_i, b2_i) as kernel weights"""
        return Weight.of(envelopes.b1[i]), Weight.of(envelopes.b2[i])
