""" Perisol
    Limit profile criteria : strict pointwise inequalities on f0, F0, finf, Finf and the
    planar Nicholson specialization
"""

import numpy as np

from perisol.criteria.base import CriterionChecker, TheoremId, everywhere, greater, less
from perisol.criteria.kernel import coupling_weight
from perisol.exceptions import CriterionPreconditionError, UnsupportedCaseError
from perisol.model.nonlinearity import NonlinearityKind
from perisol.model.system import LimitProfile

# pylint: disable=invalid-name,logging-fstring-interpolation


def limit_profile(spec) -> LimitProfile:
    """Declared limits of the system, or limits derived from every descriptor"""

    if spec.limits is not None:
        return spec.limits

    profiles = []
    for i, descriptor in enumerate(spec.nonlinearity):
        profile = descriptor.limit_profile(spec.death[i])
        if profile is None:
            raise CriterionPreconditionError(
                f"No limit profile for component {i + 1} ({descriptor.kind.value}), "
                "declare `limits` in the system description"
            )
        profiles.append(profile)

    f0, F0, finf, Finf = zip(*profiles)
    return LimitProfile(f0=f0, F0=F0, finf=finf, Finf=Finf)


def scaled_death(limit: float, death):
    """t -> limit * d(t), with inf * d = inf where d > 0 and 0 where d = 0"""
    if np.isfinite(limit):
        return lambda t: limit * np.asarray(death(t))
    return lambda t: np.where(np.asarray(death(t)) > 0, np.inf, 0.0)


class LimitProfileChecker(CriterionChecker):
    """Strict pointwise inequalities, per branch

    - sublinear : m2_i (Finf_i d_i + S_i) < d_i < m1_i (f0_i d_i + S_i)
    - superlinear : m1_i (finf_i d_i + S_i) > d_i > m2_i (F0_i d_i + S_i)

    A branch that needs a finite Finf (sublinear) or F0 (superlinear) where the profile is
    infinite is unsupported.
    """

    theorem_id = TheoremId.T3_6_LIMITS

    def evaluate(self, spec, v, limits=None, **options):
        limits = limits if limits is not None else limit_profile(spec)
        nodes = self.evaluator(spec).nodes
        bounds = self.bounds(spec)

        conditions, notes = [], []
        branches = (
            ("sublinear", limits.Finf, limits.f0),
            ("superlinear", limits.F0, limits.finf),
        )
        for branch, upper_limits, lower_limits in branches:
            if not all(np.isfinite(value) for value in upper_limits):
                self.log.debug(f"{self.theorem_id.value} : {branch} branch unsupported")
                notes.append(f"{branch} branch unsupported (infinite limit)")
                continue

            for i, bound in enumerate(bounds):
                coupling = coupling_weight(spec, i, v)
                death = spec.death[i]
                top = scaled_death(upper_limits[i], death)
                floor = scaled_death(lower_limits[i], death)

                def upper(t, death=death, top=top, coupling=coupling, m2=bound.m2):
                    return np.asarray(death(t)) - m2 * (top(t) + coupling(t))

                def lower(t, death=death, floor=floor, coupling=coupling, m1=bound.m1):
                    return m1 * (floor(t) + coupling(t)) - np.asarray(death(t))

                conditions.append(everywhere("upper", i, upper, nodes, strict=True, branch=branch))
                conditions.append(everywhere("lower", i, lower, nodes, strict=True, branch=branch))

        if not conditions:
            raise UnsupportedCaseError(
                "Both limit profile branches need finite values (Finf sublinear, F0 superlinear)"
            )
        return self.report(v, conditions, notes=notes)


class PlanarNicholson(CriterionChecker):
    """Discrete Nicholson systems with d_i > 0

    m2_i max_t S_i / d_i < 1 < m1_i min_t (b_i + S_i) / d_i
    """

    theorem_id = TheoremId.T4_2_PLANAR

    def precondition(self, spec):
        self.require_kinds(spec, (NonlinearityKind.NICHOLSON_DISCRETE,))
        nodes = self.evaluator(spec).nodes
        for i, death in enumerate(spec.death):
            values = death(nodes)
            if np.any(values <= 0):
                raise CriterionPreconditionError(
                    f"{self.theorem_id.value} needs d[{i + 1}] > 0, d vanishes near "
                    f"t={nodes[np.argmin(values)]:.6g}"
                )

    def evaluate(self, spec, v, **options):
        evaluator = self.evaluator(spec)
        nodes = evaluator.nodes
        conditions = []

        for i, bound in enumerate(self.bounds(spec)):
            coupling = coupling_weight(spec, i, v)
            birth = evaluator.derived_b(i)
            death = spec.death[i]

            ratio = coupling(nodes) / death(nodes)
            index = int(np.argmax(ratio))
            conditions.append(
                less("coupling", i, bound.m2 * ratio[index], 1.0, at=nodes[index])
            )

            ratio = (birth(nodes) + coupling(nodes)) / death(nodes)
            index = int(np.argmin(ratio))
            conditions.append(greater("birth", i, bound.m1 * ratio[index], 1.0, at=nodes[index]))

        return self.report(v, conditions)
