""" Perisol
    Criteria for bounded birth functions : derived b_i(t), hematopoiesis, gamma ratio and
    mixed monotonicity
"""

import numpy as np

from perisol.criteria.base import (
    CriterionChecker,
    TheoremId,
    at_least,
    at_most,
    greater,
    less,
    not_identically,
)
from perisol.criteria.comparison import gap
from perisol.criteria.kernel import Weight, coupling_weight
from perisol.exceptions import CriterionPreconditionError
from perisol.model.nonlinearity import BOUNDED_KINDS, HEMATOPOIESIS_KINDS, NonlinearityKind

BRANCHES = ("kernel", "pointwise", "average")


class BoundedNonlinearity(CriterionChecker):
    """Bounded g with g(t, u) <= b_i(t) u near 0, any of three branches

    - kernel : Gamma_upper B_upper max K_i[S_i] < 1 < Gamma_lower B_lower min K_i[S_i + b_i]
    - pointwise : m2_i S_i <= d_i <= m1_i (b_i + S_i), each not identically
    - average : n2_i int S_i <= 1 <= n1_i int (b_i + S_i)

    `branch` restricts the evaluation to one of them.
    """

    theorem_id = TheoremId.T3_4_BOUNDED
    kinds = BOUNDED_KINDS

    def precondition(self, spec):
        self.require_kinds(spec, self.kinds)
        for i, descriptor in enumerate(spec.nonlinearity):
            if descriptor.kind is NonlinearityKind.MACKEY_GLASS_DISTRIBUTED and any(
                term.alpha < 1 for term in descriptor.terms
            ):
                raise CriterionPreconditionError(
                    f"Mackey-Glass component {i + 1} is unbounded (exponent alpha < 1)"
                )

    def birth_scale(self, spec, i):  # pylint: disable=unused-argument
        """Factor applied to b_i"""
        return 1.0

    def strict_birth_kernel(self, spec):  # pylint: disable=unused-argument
        """Whether the lower kernel inequality is strict"""
        return True

    def evaluate(self, spec, v, branch=None, **options):
        if branch is not None and branch not in BRANCHES:
            raise ValueError(f"Unknown branch {branch}, expected one of {', '.join(BRANCHES)}")
        selected = BRANCHES if branch is None else (branch,)

        evaluator = self.evaluator(spec)
        nodes = evaluator.nodes
        conditions = []

        for i, bound in enumerate(self.bounds(spec)):
            coupling = coupling_weight(spec, i, v)
            birth = Weight.of(evaluator.derived_b(i), self.birth_scale(spec, i))
            death = spec.death[i]

            if "kernel" in selected:
                high, t_high = evaluator.extremum(i, coupling, "max")
                low, t_low = evaluator.extremum(i, coupling + birth, "min")
                lower_check = greater if self.strict_birth_kernel(spec) else at_least
                conditions.append(
                    less(
                        "coupling",
                        i,
                        bound.Gamma_upper * bound.B_upper * high,
                        1.0,
                        at=t_high,
                        branch="kernel",
                    )
                )
                conditions.append(
                    lower_check(
                        "birth",
                        i,
                        bound.Gamma_lower * bound.B_lower * low,
                        1.0,
                        at=t_low,
                        branch="kernel",
                    )
                )

            if "pointwise" in selected:
                conditions.append(
                    not_identically(
                        "coupling", i, gap(death, coupling.scaled(bound.m2)), nodes, "pointwise"
                    )
                )
                conditions.append(
                    not_identically(
                        "birth",
                        i,
                        gap((coupling + birth).scaled(bound.m1), death),
                        nodes,
                        "pointwise",
                    )
                )

            if "average" in selected:
                conditions.append(
                    at_most("coupling", i, bound.n2 * coupling.integral(), 1.0, branch="average")
                )
                conditions.append(
                    at_least(
                        "birth",
                        i,
                        bound.n1 * (coupling + birth).integral(),
                        1.0,
                        branch="average",
                    )
                )

        return self.report(v, conditions)


class NicholsonDistributed(BoundedNonlinearity):
    """Bounded criterion for distributed Nicholson systems,
    b_i(t) = sum_l beta_il(t) int_{t - tau_il(t)}^t gamma_il(s) ds"""

    theorem_id = TheoremId.T_N1_NICHOLSON
    kinds = (NonlinearityKind.NICHOLSON_DISTRIBUTED,)


class MixedMonotonicity(BoundedNonlinearity):
    """Nicholson systems with a second delay in the exponent

    The bounded criterion with b_i replaced by sigma_i b_i,
    sigma_i = B_lower / B_upper exp(-D_i(omega)). For scalar systems the lower kernel
    inequality is not strict.
    """

    theorem_id = TheoremId.T4_4_MIXED
    kinds = (NonlinearityKind.NICHOLSON_MIXED,)

    def birth_scale(self, spec, i):
        return self.bounds(spec)[i].sigma

    def strict_birth_kernel(self, spec):
        return spec.n > 1


class Hematopoiesis(CriterionChecker):
    """Decreasing birth functions with g_i(t, 0) > 0, any of three coupling conditions

    - kernel : Gamma_upper B_upper max K_i[S_i] < 1
    - pointwise : m2_i S_i <= d_i, not identically
    - average : n2_i int S_i <= 1
    """

    theorem_id = TheoremId.T4_1_HEMATOPOIESIS

    def precondition(self, spec):
        self.require_kinds(spec, HEMATOPOIESIS_KINDS)

    def evaluate(self, spec, v, **options):
        evaluator = self.evaluator(spec)
        conditions = []

        for i, bound in enumerate(self.bounds(spec)):
            coupling = coupling_weight(spec, i, v)
            high, t_high = evaluator.extremum(i, coupling, "max")
            conditions.append(
                less(
                    "coupling",
                    i,
                    bound.Gamma_upper * bound.B_upper * high,
                    1.0,
                    at=t_high,
                    branch="kernel",
                )
            )
            conditions.append(
                not_identically(
                    "coupling",
                    i,
                    gap(spec.death[i], coupling.scaled(bound.m2)),
                    evaluator.nodes,
                    "pointwise",
                )
            )
            conditions.append(
                at_most("coupling", i, bound.n2 * coupling.integral(), 1.0, branch="average")
            )

        return self.report(v, conditions)


class GammaRatio(CriterionChecker):
    """Nonimpulsive bounded systems, either branch

    - ratio : gamma_i(t, v) = b_i v_i / (d_i v_i - sum_j v_j a_ij) >= 1, not identically
    - average : exp(D_i(omega)) int S_i <= exp(D_i(omega)) - 1 <= int (b_i + S_i)

    The ratio needs d_i v_i > sum_j v_j a_ij at every t.
    """

    theorem_id = TheoremId.C3_4_GAMMA

    def precondition(self, spec):
        self.require_nonimpulsive(spec)
        self.require_kinds(spec, BOUNDED_KINDS)

    def evaluate(self, spec, v, **options):
        evaluator = self.evaluator(spec)
        nodes = evaluator.nodes
        conditions = []

        for i in range(spec.n):
            coupling = coupling_weight(spec, i, v)
            birth = evaluator.derived_b(i)
            death = spec.death[i]

            denominator = gap(death, coupling)
            values = denominator(nodes)
            if np.any(values <= 0):
                where = nodes[int(np.argmin(values))]
                raise CriterionPreconditionError(
                    f"gamma ratio of component {i + 1} is undefined : "
                    f"d v - A v <= 0 at t={where:.6g}"
                )

            def ratio(t, birth=birth, denominator=denominator):
                return np.asarray(birth(t)) / denominator(t) - 1.0

            conditions.append(not_identically("gamma", i, ratio, nodes, "ratio"))

            growth = np.exp(death.integral())
            conditions.append(
                at_most(
                    "coupling", i, growth * coupling.integral(), growth - 1.0, branch="average"
                )
            )
            conditions.append(
                at_least(
                    "birth",
                    i,
                    (coupling + Weight.of(birth)).integral(),
                    growth - 1.0,
                    branch="average",
                )
            )

        return self.report(v, conditions)
