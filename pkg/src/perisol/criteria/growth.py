""" Perisol
    Kernel criteria with envelope pairs : sublinear, superlinear and unit-vector versions
"""

import numpy as np

from perisol.criteria.base import EnvelopeChecker, TheoremId, at_least, at_most
from perisol.criteria.kernel import coupling_weight


class Sublinear(EnvelopeChecker):
    """c0_i(v) >= 1 and Cinf_i(v) <= 1 for every component

    c0_i(v) = Gamma_lower B_lower min_t K_i[sum_j v_j/v_i a_ij + b1_i](t)
    Cinf_i(v) = Gamma_upper B_upper max_t K_i[sum_j v_j/v_i a_ij + b2_i](t)
    """

    theorem_id = TheoremId.T3_2_SUBLINEAR

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        evaluator = self.evaluator(spec)
        conditions = []

        for i, bound in enumerate(self.bounds(spec)):
            coupling = coupling_weight(spec, i, v)
            b1, b2 = self.weights(envelopes, i)

            low, t_low = evaluator.extremum(i, coupling + b1, "min")
            high, t_high = evaluator.extremum(i, coupling + b2, "max")

            conditions.append(
                at_least("c0", i, bound.Gamma_lower * bound.B_lower * low, 1.0, at=t_low)
            )
            conditions.append(
                at_most("Cinf", i, bound.Gamma_upper * bound.B_upper * high, 1.0, at=t_high)
            )

        return self.report(v, conditions)


class UnitVector(Sublinear):
    """Sublinear criterion with v = (1, ..., 1)"""

    theorem_id = TheoremId.T3_1

    def evaluate(self, spec, v, envelopes=None, **options):
        return super().evaluate(spec, np.ones(spec.n), envelopes=envelopes, **options)


class Superlinear(EnvelopeChecker):
    """C0_i(v) <= 1 and cinf_i(v) >= 1 for every component, with declared envelopes

    The roles of b1 and b2 are swapped with respect to the sublinear case: b1 bounds g
    from above near 0 and b2 from below near infinity.
    """

    theorem_id = TheoremId.T3_2_SUPERLINEAR
    sweep = False

    def evaluate_envelopes(self, spec, envelopes, v, **options):
        evaluator = self.evaluator(spec)
        conditions = []

        for i, bound in enumerate(self.bounds(spec)):
            coupling = coupling_weight(spec, i, v)
            b1, b2 = self.weights(envelopes, i)

            high, t_high = evaluator.extremum(i, coupling + b1, "max")
            low, t_low = evaluator.extremum(i, coupling + b2, "min")

            conditions.append(
                at_most("C0", i, bound.Gamma_upper * bound.B_upper * high, 1.0, at=t_high)
            )
            conditions.append(
                at_least("cinf", i, bound.Gamma_lower * bound.B_lower * low, 1.0, at=t_low)
            )

        return self.report(v, conditions)
