""" Tests for perisol.impulse_algebra
"""

import math
from pathlib import Path

import numpy as np
import pytest

from perisol import impulse_algebra as ia
from perisol import zoo
from perisol.model.grid import GridFunction
from perisol.model.impulses import ImpulseKind, ImpulseMap, ImpulseSchedule
from perisol.model.nonlinearity import NonlinearityDescriptor, NonlinearityKind, NonlinearTerm
from perisol.model.periodic import PeriodicFn
from perisol.model.system import SystemSpec, load_system


@pytest.fixture
def scalar_spec():
    """Scalar system with one linear impulse eta = 0.2 at t = 0.5, int d = 1"""
    return load_system("tests/scalar_system.yml")


OMEGA = math.log(2) / 2


@pytest.mark.parametrize("eta", [0.0, 0.1, 0.2, 0.3])
def test_planar_multipliers(eta):
    """m1, m2 of the planar example match their closed forms (e^{2 omega} = 2)"""

    spec = zoo.planar_autonomous_example(OMEGA, eta=eta).spec
    for bound in ia.bounds(spec):
        assert bound.m1 == pytest.approx(1.0 / (2.0 - (1.0 + eta)), abs=1e-12)
        assert bound.m2 == pytest.approx(1.0 / (2.0 / (1.0 + eta) - 1.0), abs=1e-12)
        assert bound.m1 == pytest.approx(zoo.planar_m1(OMEGA, eta), abs=1e-12)
        assert bound.m2 == pytest.approx(zoo.planar_m2(OMEGA, eta), abs=1e-12)


def test_nonimpulsive_collapse():
    """Without impulses every B bound is 1 and both Gamma bounds agree"""

    spec = zoo.planar_autonomous_example(OMEGA, eta=0.0).spec
    assert not spec.is_impulsive()
    for bound in ia.bounds(spec):
        assert bound.B_lower == bound.B_upper == 1.0
        assert bound.Gamma_lower == pytest.approx(bound.Gamma_upper)
        assert bound.Gamma_lower == pytest.approx(1.0, abs=1e-12)
        assert bound.m1 == pytest.approx(1.0, abs=1e-12)
        assert bound.m2 == pytest.approx(1.0, abs=1e-12)
        assert bound.sigma == pytest.approx(0.5)


def test_scalar_bounds(scalar_spec):
    """Bounds of one linear impulse"""

    (bound,) = ia.bounds(scalar_spec)
    growth = math.e
    assert bound.D_omega == pytest.approx(1.0)
    assert bound.B_lower == pytest.approx(1.0 / 1.2)
    assert bound.B_upper == pytest.approx(1.0)
    assert bound.Gamma_upper == pytest.approx(1.0 / (growth / 1.2 - 1.0))
    assert bound.m1 == pytest.approx((growth - 1.0) / (growth - 1.2))
    assert bound.n2 == pytest.approx(bound.Gamma_upper * growth)
    assert ia.Gamma(scalar_spec, 0) == pytest.approx(bound.Gamma_upper)


def test_products(scalar_spec):
    """B is one before the instant, 1 / (1 + eta) after it, and multiplicative over periods"""

    assert ia.B(scalar_spec, 0, None, 0.5, side="left") == pytest.approx(1.0)
    assert ia.B(scalar_spec, 0, None, 0.5, side="right") == pytest.approx(1.0 / 1.2)
    assert ia.B(scalar_spec, 0, None, 1.5, side="right") == pytest.approx(1.0 / 1.44)
    assert ia.B_window(scalar_spec, 0, None, 0.2, 1.6) == pytest.approx(1.0 / 1.44)
    assert ia.B_window(scalar_spec, 0, None, 0.6, 1.4) == pytest.approx(1.0)
    assert ia.impulse_factors(scalar_spec, 0) == pytest.approx([1.0 / 1.2])
    assert ia.D(scalar_spec, 0, 2.0) == pytest.approx(2.0)


def test_cyclic_windows():
    """B bounds run over cyclic windows of consecutive instants"""

    omega = 1.0
    term = NonlinearTerm(
        beta=PeriodicFn.constant(omega, 1.0),
        tau=PeriodicFn.constant(omega, 0.5),
        c=PeriodicFn.constant(omega, 1.0),
    )
    spec = SystemSpec(
        n=1,
        omega=omega,
        death=(PeriodicFn.constant(omega, 3.0),),
        coupling=((PeriodicFn.constant(omega, 0.0),),),
        nonlinearity=(NonlinearityDescriptor(NonlinearityKind.NICHOLSON_DISCRETE, (term,)),),
        impulses=ImpulseSchedule(
            instants=(0.25, 0.75),
            maps=(
                (ImpulseMap(kind=ImpulseKind.LINEAR, eta=1.0),),
                (ImpulseMap(kind=ImpulseKind.LINEAR, eta=3.0),),
            ),
        ),
    )
    (bound,) = ia.bounds(spec)
    assert bound.B_lower == pytest.approx(0.125)
    assert bound.B_upper == pytest.approx(1.0)
    assert bound.Gamma_upper == pytest.approx(1.0 / (np.exp(3.0) / 8.0 - 1.0))
    assert ia.B_window(spec, 0, None, 0.5, 1.5) == pytest.approx(0.125)
    assert ia.B_window(spec, 0, None, 0.8, 1.2) == pytest.approx(0.5)


def test_continuous_transform(scalar_spec):
    """B x is continuous at the instant when x jumps by the impulse"""

    grid = scalar_spec.grid(points=64)
    jumped = grid.t >= 0.5
    right = np.where(jumped[:, None], 1.2, 1.0)
    left = np.where((grid.t > 0.5)[:, None], 1.2, 1.0)
    x = GridFunction(grid, left, right)
    y_left, y_right = ia.continuous_transform(scalar_spec, x)
    node = int(np.flatnonzero(np.isclose(grid.t, 0.5))[0])
    assert y_left[node, 0] == pytest.approx(1.0)
    assert y_right[node, 0] == pytest.approx(1.0)


def built_in_systems():
    """Zoo entries and shipped system files"""
    specs = [(entry_id, zoo.make_entry(entry_id).spec) for entry_id in zoo.zoo_ids()]
    for path in sorted(Path("config/systems").glob("*.yml")):
        specs.append((path.stem, load_system(str(path))))
    return specs


@pytest.fixture(params=built_in_systems(), ids=lambda item: item[0])
def system(request):
    """One built-in system"""
    return request.param[1]


def test_factor_sandwich(system):
    """1 / (1 + eta) <= J(u) <= 1 / (1 + alpha) for every map on random states"""

    rng = np.random.default_rng(17)
    for i in range(system.n):
        for k in range(system.p):
            impulse_map = system.impulses.map_for(i, k)
            states = 20.0 * (1.0 - rng.uniform(size=1000))
            factors = ia.J(impulse_map, states)
            assert np.all(factors >= 1.0 / (1.0 + impulse_map.upper_slope) - 1e-12)
            assert np.all(factors <= 1.0 / (1.0 + impulse_map.lower_slope) + 1e-12)


def test_window_bounds(system):
    """B_lower <= B~(t, s; x) <= B_upper and Gamma_lower <= Gamma(x) <= Gamma_upper"""

    rng = np.random.default_rng(19)
    grid = system.grid(64)
    omega = system.omega
    for bound in ia.bounds(system):
        i = bound.component
        for _ in range(50):
            x = GridFunction.constant(grid, rng.uniform(0.01, 20.0, system.n))
            gamma = ia.Gamma(system, i, x)
            assert bound.Gamma_lower * (1 - 1e-12) <= gamma <= bound.Gamma_upper * (1 + 1e-12)
            for start, length in zip(rng.uniform(-omega, 2 * omega, 20), rng.uniform(0, omega, 20)):
                window = ia.B_window(system, i, x, start, start + length)
                assert bound.B_lower * (1 - 1e-12) <= window <= bound.B_upper * (1 + 1e-12)


def test_window_cocycle(system):
    """B~(t, s) B~(s, r) = B~(t, r) for t <= s <= r <= t + omega, and B~ is omega-shift invariant"""

    rng = np.random.default_rng(23)
    omega = system.omega
    for i in range(system.n):
        for _ in range(1000):
            start = rng.uniform(-2 * omega, 2 * omega)
            middle, stop = start + np.sort(rng.uniform(0.0, omega, 2))
            whole = ia.B_window(system, i, None, start, stop)
            split = ia.B_window(system, i, None, start, middle) * ia.B_window(
                system, i, None, middle, stop
            )
            assert split == pytest.approx(whole, rel=1e-12)
            shifted = ia.B_window(system, i, None, start + omega, stop + omega)
            assert shifted == pytest.approx(whole, rel=1e-12)


def test_coefficient_periodicity(system):
    """Every periodic coefficient repeats with the period on random times"""

    omega = system.omega
    functions = list(system.death) + [a for row in system.coupling for a in row]
    for descriptor in system.nonlinearity:
        functions += [term.beta for term in descriptor.terms]
        functions += [term.tau for term in descriptor.terms]
    times = np.random.default_rng(29).uniform(-10 * omega, 10 * omega, 1000)
    for func in functions:
        values = func(times)
        assert np.all(np.abs(func(times + omega) - values) <= 1e-12 * (1.0 + np.abs(values)))
