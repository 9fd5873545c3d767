""" Perisol
    Existence criteria : checker factory and one-call helpers
"""

from perisol.criteria.base import TheoremId
from perisol.criteria.bounded import (
    BoundedNonlinearity,
    GammaRatio,
    Hematopoiesis,
    MixedMonotonicity,
    NicholsonDistributed,
)
from perisol.criteria.comparison import Average, Nonimpulsive, Pointwise, Scalar
from perisol.criteria.growth import Sublinear, Superlinear, UnitVector
from perisol.criteria.limits import LimitProfileChecker, PlanarNicholson

CHECKERS = {
    TheoremId.T3_1: UnitVector,
    TheoremId.T3_2_SUBLINEAR: Sublinear,
    TheoremId.T3_2_SUPERLINEAR: Superlinear,
    TheoremId.T3_3_POINTWISE: Pointwise,
    TheoremId.T3_3_AVERAGE: Average,
    TheoremId.C3_1_NONIMPULSIVE: Nonimpulsive,
    TheoremId.C_SCALAR: Scalar,
    TheoremId.T3_6_LIMITS: LimitProfileChecker,
    TheoremId.T3_4_BOUNDED: BoundedNonlinearity,
    TheoremId.C3_4_GAMMA: GammaRatio,
    TheoremId.T4_1_HEMATOPOIESIS: Hematopoiesis,
    TheoremId.T_N1_NICHOLSON: NicholsonDistributed,
    TheoremId.T4_4_MIXED: MixedMonotonicity,
    TheoremId.T4_2_PLANAR: PlanarNicholson,
}


def make_checker(theorem_id, **kwargs):
    """Create and return the checker of a given criterion id"""

    try:
        key = TheoremId(theorem_id)
    except ValueError:
        known = ", ".join(member.value for member in TheoremId)
        raise ValueError(f"The criterion {theorem_id} does not exist (known: {known})") from None
    return CHECKERS[key](**kwargs)


def check_sublinear(spec, envelopes=None, v=None, **kwargs):
    """Sublinear envelope criterion"""
    return Sublinear(**kwargs).check(spec, v, envelopes=envelopes)


def check_superlinear(spec, envelopes=None, v=None, **kwargs):
    """Superlinear envelope criterion (declared envelopes)"""
    return Superlinear(**kwargs).check(spec, v, envelopes=envelopes)


def check_pointwise(spec, envelopes=None, v=None, **kwargs):
    """Pointwise envelope criterion"""
    return Pointwise(**kwargs).check(spec, v, envelopes=envelopes)


def check_average(spec, envelopes=None, v=None, **kwargs):
    """Averaged envelope criterion"""
    return Average(**kwargs).check(spec, v, envelopes=envelopes)


def check_limit_profile(spec, limits=None, v=None, **kwargs):
    """Limit profile criterion, both branches"""
    return LimitProfileChecker(**kwargs).check(spec, v, limits=limits)


def check_bounded_nonlinearity(spec, v=None, branch=None, **kwargs):
    """Bounded birth function criterion"""
    return BoundedNonlinearity(**kwargs).check(spec, v, branch=branch)


def check_gamma_ratio(spec, v=None, **kwargs):
    """Gamma ratio criterion of nonimpulsive systems"""
    return GammaRatio(**kwargs).check(spec, v)


def check_mixed_monotonicity(spec, v=None, branch=None, **kwargs):
    """Mixed monotonicity criterion"""
    return MixedMonotonicity(**kwargs).check(spec, v, branch=branch)
