""" Perisol
    eps-parameterized envelope families (b1, b2) of the built-in nonlinearity kinds
"""

from perisol.criteria.kernel import Weight
from perisol.model.nonlinearity import BOUNDED_KINDS, HEMATOPOIESIS_KINDS, NonlinearityKind
from perisol.model.system import EnvelopePair


def component_envelopes(spec, evaluator, bound, i: int, eps: float):
    """(b1_i, b2_i) for component i

    - bounded kinds : b1 = (1 - eps) b_i, b2 = eps
    - hematopoiesis kinds : b1 = 1 / eps, b2 = eps (g_i(t, 0) > 0)
    - nicholson_mixed : b1 = (1 - eps) sigma_i b_i, b2 = eps
    - custom_table : as bounded kinds, or as hematopoiesis when h(0) > 0
    """

    descriptor = spec.nonlinearity[i]
    floor = Weight.of(evaluator.one, eps)

    if descriptor.kind in HEMATOPOIESIS_KINDS:
        return Weight.of(evaluator.one, 1.0 / eps), floor

    if descriptor.kind is NonlinearityKind.CUSTOM_TABLE and any(
        term.h(0.0) > 0 for term in descriptor.terms
    ):
        return Weight.of(evaluator.one, 1.0 / eps), floor

    scale = 1.0 - eps
    if descriptor.kind is NonlinearityKind.NICHOLSON_MIXED:
        scale *= bound.sigma
    elif descriptor.kind not in BOUNDED_KINDS + (NonlinearityKind.CUSTOM_TABLE,):
        raise ValueError(f"No envelope family for nonlinearity kind {descriptor.kind.value}")

    return Weight.of(evaluator.derived_b(i), scale), floor


def envelope_family(spec, evaluator, bounds, eps: float) -> EnvelopePair:
    """EnvelopePair of the whole system for one value of eps in (0, 1)"""

    if not 0 < eps < 1:
        raise ValueError(f"Envelope parameter eps must lie in (0, 1), got {eps}")

    pairs = [component_envelopes(spec, evaluator, bounds[i], i, eps) for i in range(spec.n)]
    return EnvelopePair(b1=tuple(b1 for b1, _ in pairs), b2=tuple(b2 for _, b2 in pairs))
