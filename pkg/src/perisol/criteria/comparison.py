""" Perisol
    Comparison criteria : pointwise and averaged envelope inequalities, their nonimpulsive
    and scalar forms
"""

import numpy as np

from perisol.criteria.base import EnvelopeChecker, TheoremId, at_least, at_most, everywhere
from perisol.criteria.kernel import coupling_weight
from perisol.exceptions import CriterionPreconditionError


def gap(left, right):
    """t -> left(t) - right(t)"""
    return lambda t: np.asarray(left(t)) - np.asarray(right(t))


def pointwise_conditions(spec, envelopes, v, nodes, lower_factors, upper_factors, branch=""):
    """upper_i * (b2_i + S_i) <= d_i <= lower_i * (b1_i + S_i) at every t,
    S_i = sum_j v_j/v_i a_ij"""

    conditions = []
    for i in range(spec.n):
        coupling = coupling_weight(spec, i, v)
        b1, b2 = EnvelopeChecker.weights(envelopes, i)
        death = spec.death[i]

        upper = gap(death, (b2 + coupling).scaled(upper_factors[i]))
        lower = gap((b1 + coupling).scaled(lower_factors[i]), death)
        conditions.append(everywhere("upper", i, upper, nodes, branch=branch))
        conditions.append(everywhere("lower", i, lower, nodes, branch=branch))
    return conditions


def average_conditions(spec, envelopes, v, lower_factors, upper_factors, branch=""):
    """upper_i * int (b2_i + S_i) <= 1 <= lower_i * int (b1_i + S_i)"""

    conditions = []
    for i in range(spec.n):
        coupling = coupling_weight(spec, i, v).integral()
        b1, b2 = EnvelopeChecker.weights(envelopes, i)
        conditions.append(
            at_most("upper", i, upper_factors[i] * (b2.integral() + coupling), 1.0, branch=branch)
        )
        conditions.append(
            at_least("lower", i, lower_factors[i] * (b1.integral() + coupling), 1.0, branch=branch)
        )
    return conditions


class Pointwise(EnvelopeChecker):
    """m2_i (b2_i + S_i) <= d_i <= m1_i (b1_i + S_i) at every t"""

    theorem_id = TheoremId.T3_3_POINTWISE

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        bounds = self.bounds(spec)
        conditions = pointwise_conditions(
            spec,
            envelopes,
            v,
            self.evaluator(spec).nodes,
            [bound.m1 for bound in bounds],
            [bound.m2 for bound in bounds],
        )
        return self.report(v, conditions)


class Average(EnvelopeChecker):
    """n2_i int (b2_i + S_i) <= 1 <= n1_i int (b1_i + S_i)"""

    theorem_id = TheoremId.T3_3_AVERAGE

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        bounds = self.bounds(spec)
        conditions = average_conditions(
            spec, envelopes, v, [bound.n1 for bound in bounds], [bound.n2 for bound in bounds]
        )
        return self.report(v, conditions)


class Nonimpulsive(EnvelopeChecker):
    """Systems without impulses, either branch

    - pointwise : b2_i <= d_i - S_i <= b1_i
    - average : int (b2_i + S_i) <= 1 - exp(-D_i(omega)) and int (b1_i + S_i) >= exp(D_i(omega)) - 1
    """

    theorem_id = TheoremId.C3_1_NONIMPULSIVE

    def precondition(self, spec):
        self.require_nonimpulsive(spec)

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        ones = np.ones(spec.n)
        growth = np.array([np.exp(d.integral()) for d in spec.death])
        conditions = pointwise_conditions(
            spec, envelopes, v, self.evaluator(spec).nodes, ones, ones, branch="pointwise"
        )
        conditions += average_conditions(
            spec, envelopes, v, 1.0 / (growth - 1.0), growth / (growth - 1.0), branch="average"
        )
        return self.report(v, conditions)


class Scalar(EnvelopeChecker):
    """One component system, either branch

    - pointwise : m2 b2 <= d <= m1 b1
    - average : n2 int b2 <= 1 <= n1 int b1
    """

    theorem_id = TheoremId.C_SCALAR

    def precondition(self, spec):
        if spec.n != 1:
            raise CriterionPreconditionError(
                f"{self.theorem_id.value} only applies to scalar systems (n = {spec.n})"
            )

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        (bound,) = self.bounds(spec)
        conditions = pointwise_conditions(
            spec,
            envelopes,
            v,
            self.evaluator(spec).nodes,
            [bound.m1],
            [bound.m2],
            branch="pointwise",
        )
        conditions += average_conditions(
            spec, envelopes, v, [bound.n1], [bound.n2], branch="average"
        )
        return self.report(v, conditions)
