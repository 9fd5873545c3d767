""" Tests for perisol.model : coefficients, impulse maps, birth functions and system loading
"""

import numpy as np
import pytest

from perisol import zoo
from perisol.exceptions import ConfigError, HypothesisError, ModelError
from perisol.model.grid import GridFunction, history_window, make_grid
from perisol.model.impulses import ImpulseKind, ImpulseMap
from perisol.model.nonlinearity import NonlinearityKind
from perisol.model.periodic import PeriodicFn, eval_periodic
from perisol.model.system import load_system, save_system, system_from_dict
from perisol.utils.config import load_settings, validate_config


@pytest.fixture
def scalar_spec():
    """Scalar impulsive Nicholson system"""
    return load_system("tests/scalar_system.yml")


def minimal_config(**changes):
    """Smallest valid scalar description, with overrides"""
    config = {
        "name": "minimal",
        "period": 1.0,
        "dimension": 1,
        "death": [1.0],
        "nonlinearity": [
            {"kind": "nicholson_discrete", "terms": [{"beta": 2.0, "tau": 0.5, "c": 1.0}]}
        ],
    }
    config.update(changes)
    return config


def test_periodic_values():
    """Fourier series values, exact integrals and periodic extension"""

    coef = PeriodicFn(1.0, 1.0, cos_coeffs=(0.5,))
    assert coef(0.0) == pytest.approx(1.5)
    assert coef(0.5) == pytest.approx(0.5)
    assert coef(1.25) == pytest.approx(coef(0.25))
    assert coef.integral() == pytest.approx(1.0)
    assert coef.antiderivative(1.0) == pytest.approx(1.0)
    assert coef.antiderivative(0.25) == pytest.approx(0.25 + 0.5 / (2 * np.pi))
    assert coef.antiderivative(3.0) == pytest.approx(3.0)
    assert not coef.is_constant()
    assert PeriodicFn.constant(1.0, 2.0).is_constant()
    assert eval_periodic(coef, 0.5) == pytest.approx(0.5)


def test_negative_coefficient():
    """Coefficients flagged nonnegative refuse negative values"""

    coef = PeriodicFn(1.0, 0.1, cos_coeffs=(1.0,), label="d")
    with pytest.raises(ModelError):
        coef(0.5)

    signed = PeriodicFn(1.0, 0.1, cos_coeffs=(1.0,), nonneg=False)
    assert signed(0.5) == pytest.approx(-0.9)


def test_impulse_maps():
    """Jump sizes, J factors and slope bounds of the impulse map families"""

    linear = ImpulseMap(kind=ImpulseKind.LINEAR, eta=0.5)
    assert linear(2.0) == pytest.approx(1.0)
    assert linear.J(2.0) == pytest.approx(2.0 / 3.0)
    assert linear.lower_slope == linear.upper_slope == 0.5

    saturating = ImpulseMap(kind=ImpulseKind.SATURATING, eta=1.0, scale=1.0)
    assert saturating(1.0) == pytest.approx(0.5)
    assert saturating.j0 == pytest.approx(0.5)

    with pytest.raises(HypothesisError) as err:
        ImpulseMap(kind=ImpulseKind.LINEAR, eta=-1.0)
    assert err.value.tag == "H2"


def test_birth_functions():
    """Constant state evaluation and derived growth rates"""

    entry = zoo.nicholson_distributed_system()
    descriptor = entry.spec.nonlinearity[0]
    assert descriptor.kind is NonlinearityKind.NICHOLSON_DISTRIBUTED
    assert descriptor.is_distributed

    times = np.linspace(0.0, 1.0, 11)
    beta = descriptor.terms[0].beta(times)
    assert descriptor.evaluate_constant(times, 0.0) == pytest.approx(np.zeros(11))
    # window of length 0.5, gamma = c = 1
    assert descriptor.evaluate_constant(times, 1.0) == pytest.approx(beta * 0.5 * np.exp(-1.0))
    assert descriptor.derived_b(1.0)(times) == pytest.approx(beta * 0.5)


def test_grid_function():
    """Periodic evaluation, integrals and jumps of sampled functions"""

    grid = make_grid(1.0, breakpoints=(0.5,), points=64)
    assert 0.5 in grid.t

    constant = GridFunction.constant(grid, [2.0, 3.0])
    assert constant.integral(0.0, 1.0) == pytest.approx([2.0, 3.0])
    assert constant.integral(0.25, 2.25) == pytest.approx([4.0, 6.0])

    smooth = GridFunction.from_callable(grid, lambda t: 1.0 + np.sin(2 * np.pi * t))
    assert smooth.evaluate(1.3)[0] == pytest.approx(smooth.evaluate(0.3)[0], abs=1e-12)
    assert smooth.evaluate(0.3)[0] == pytest.approx(1.0 + np.sin(0.6 * np.pi), abs=1e-6)
    assert smooth.integral(0.0, 1.0)[0] == pytest.approx(1.0, abs=1e-6)

    segment = history_window(smooth, 0.8, 0.5)
    assert segment(-0.5)[0] == pytest.approx(1.0 + np.sin(0.6 * np.pi), abs=1e-6)
    assert segment(0.0)[0] == pytest.approx(smooth.evaluate(0.8)[0])
    with pytest.raises(ModelError):
        history_window(smooth, 0.8, -0.1)

    left = np.where(grid.t <= 0.5, 1.0, 2.0)
    right = np.where(grid.t < 0.5, 1.0, 2.0)
    step = GridFunction(grid, left, right)
    jumps = dict((index, value[0]) for index, value in step.jumps())
    assert jumps[int(np.argmin(np.abs(grid.t - 0.5)))] == pytest.approx(1.0)


def test_load_system(scalar_spec):
    """YAML description is parsed into a SystemSpec"""

    assert scalar_spec.name == "scalar_impulsive"
    assert scalar_spec.n == 1
    assert scalar_spec.omega == 1.0
    assert scalar_spec.p == 1
    assert scalar_spec.is_impulsive()
    assert scalar_spec.kinds() == [NonlinearityKind.NICHOLSON_DISCRETE]
    assert scalar_spec.death[0](0.0) == pytest.approx(1.2)
    assert scalar_spec.max_delay() == pytest.approx(0.3)
    # instant and its delay images
    assert scalar_spec.breakpoints() == pytest.approx([0.1, 0.5, 0.8])


def test_round_trip(scalar_spec, tmp_path):
    """load -> save -> load gives back the same system"""

    path = tmp_path / "system.yml"
    save_system(scalar_spec, str(path))
    assert load_system(str(path)) == scalar_spec

    planar = zoo.planar_autonomous_example(eta=0.2).spec
    save_system(planar, str(path))
    assert load_system(str(path)) == planar


def test_broken_impulse():
    """A lower slope alpha <= -1 violates (H2)"""

    with pytest.raises(HypothesisError) as err:
        load_system("tests/broken.yml")
    assert err.value.tag == "H2"


def test_hypotheses():
    """(H1), (H3) and (H4) violations carry their tag"""

    impulses = {
        "instants": [0.7, 0.2],
        "maps": [[{"kind": "linear", "eta": 0.1}], [{"kind": "linear", "eta": 0.1}]],
    }
    with pytest.raises(HypothesisError) as err:
        system_from_dict(minimal_config(impulses=impulses))
    assert err.value.tag == "H1"

    with pytest.raises(HypothesisError) as err:
        zoo.planar_autonomous_example(eta=1.5)
    assert err.value.tag == "H3"

    with pytest.raises(HypothesisError) as err:
        system_from_dict(minimal_config(death=[{"mean": 0.0, "sin": [0.0]}]))
    assert err.value.tag == "H4"


def test_structure_errors():
    """Malformed systems are refused before any hypothesis is checked"""

    with pytest.raises(ModelError):
        system_from_dict(minimal_config(coupling=[[0.5]]))

    with pytest.raises(ModelError):
        system_from_dict(minimal_config(death=[1.0, 1.0]))

    with pytest.raises(ConfigError) as err:
        validate_config({"period": 1.0})
    assert "dimension" in err.value.errors

    with pytest.raises(ConfigError):
        validate_config(minimal_config(nonlinearity=[{"kind": "unknown", "terms": []}]))


def test_settings():
    """Run settings file overrides defaults"""

    settings = load_settings("tests/settings.yml")
    assert settings.grid_points == 256
    assert settings.tolerance == pytest.approx(1e-7)
    assert settings.t_end == pytest.approx(20.0)
    assert settings.damping == pytest.approx(0.5)
    assert load_settings().grid_points == 512


@pytest.mark.parametrize(
    "path",
    [
        "config/systems/nicholson_stocking.yml",
        "config/systems/hematopoiesis_harvest.yml",
        "config/systems/mackey_glass_pulse.yml",
    ],
)
def test_example_systems(path):
    """Shipped system descriptions satisfy the hypotheses"""

    spec = load_system(path)
    assert spec.is_impulsive()
    assert load_settings("config/settings.yml").grid_points == 512


@pytest.mark.parametrize(
    "impulse_map,scale",
    [
        (ImpulseMap(kind=ImpulseKind.LINEAR, eta=-0.4), 1.0),
        (ImpulseMap(kind=ImpulseKind.SATURATING, eta=0.5, scale=2.0), 2.0),
        (
            ImpulseMap(
                kind=ImpulseKind.BOUNDED_SLOPE,
                alpha=0.05,
                eta=0.3,
                table=((0, 0), (1, 0.3), (2, 0.4), (4, 0.6)),
            ),
            4.0,
        ),
    ],
)
def test_impulse_cone(impulse_map, scale):
    """alpha u <= I(u) <= eta u on random states u in (0, 10 scale]"""

    states = 10.0 * scale * (1.0 - np.random.default_rng(7).uniform(size=1000))
    jumps = impulse_map(states)
    tol = 1e-12 * (1.0 + states)
    assert np.all(jumps <= impulse_map.upper_slope * states + tol)
    assert np.all(jumps >= impulse_map.lower_slope * states - tol)
    assert impulse_map.J(1e-12) == pytest.approx(impulse_map.j0, rel=1e-6)
