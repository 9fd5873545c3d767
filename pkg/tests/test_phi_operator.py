""" Tests for perisol.phi_operator
"""

import numpy as np
import pytest

from perisol import impulse_algebra, zoo
from perisol.exceptions import ModelError
from perisol.model.grid import DEFAULT_POINTS, GridFunction
from perisol.model.system import SystemSpec, load_system
from perisol.phi_operator import (
    ConeParams,
    apply_phi,
    cone_membership,
    jump_identity_check,
    solve_fixed_point,
)
from perisol.simulator import integrate, sup_deviation


def constant_birth_system():
    """x' = -2 x + 4, period 1 : Phi maps every function to the constant 2"""
    return SystemSpec.from_dict(
        {
            "name": "constant_birth",
            "period": 1.0,
            "dimension": 1,
            "death": [2.0],
            "nonlinearity": [
                {
                    "kind": "custom_table",
                    "terms": [{"beta": 1.0, "tau": 0.5, "table": [[0, 4], [1, 4]]}],
                }
            ],
        }
    )


@pytest.fixture
def scalar_spec():
    """Scalar system with one linear impulse eta = 0.2 at t = 0.5"""
    return load_system("tests/scalar_system.yml")


def test_constant_phi():
    """Phi of a constant birth is d-weighted average of the source"""

    spec = constant_birth_system()
    grid = spec.grid(64)
    image = apply_phi(spec, GridFunction.constant(grid, [1.0]))
    assert np.allclose(image.left, 2.0, atol=1e-8)
    assert np.allclose(image.right, 2.0, atol=1e-8)


def test_constant_fixed_point():
    """Undamped iteration reaches the constant solution at the second iterate"""

    spec = constant_birth_system()
    result = solve_fixed_point(spec, damping=1.0, points=64)
    assert result.converged
    assert result.iterations == 2
    assert result.solution.left[:, 0] == pytest.approx(np.full(result.solution.grid.size, 2.0))
    assert result.summary()["cone_check"]


def test_phi_domain():
    """Phi acts on nonnegative functions with one component per equation"""

    spec = constant_birth_system()
    grid = spec.grid(64)
    with pytest.raises(ModelError):
        apply_phi(spec, GridFunction.constant(grid, [-1.0]))
    with pytest.raises(ModelError):
        apply_phi(spec, GridFunction.constant(grid, [1.0, 1.0]))
    with pytest.raises(ValueError):
        solve_fixed_point(spec, damping=0.0)


def test_cone():
    """Cone parameters and membership"""

    with pytest.raises(ModelError):
        ConeParams((0.0,))
    spec = constant_birth_system()
    grid = spec.grid(64)
    cone = ConeParams.from_spec(spec)
    assert cone.sigma[0] == pytest.approx(np.exp(-2.0))
    member, margin = cone_membership(GridFunction.constant(grid, [1.0]), cone)
    assert member
    assert margin == pytest.approx(1.0 - np.exp(-2.0))
    ramp = GridFunction.from_callable(grid, lambda t: 1e-3 + np.sin(np.pi * t) ** 2)
    assert not cone_membership(ramp, cone)[0]


def test_cone_preserved(scalar_spec):
    """Phi maps random cone elements back into the cone"""

    grid = scalar_spec.grid(128)
    cone = ConeParams.from_spec(scalar_spec)
    rng = np.random.default_rng(3)
    for level, phase in zip(rng.uniform(0.2, 3.0, 20), rng.uniform(0.0, 2 * np.pi, 20)):
        x = GridFunction.from_callable(
            grid, lambda t, a=level, b=phase: a * (1.0 + 0.3 * np.sin(2 * np.pi * t + b))
        )
        assert cone_membership(x, cone)[0]
        assert cone_membership(apply_phi(scalar_spec, x), cone)[0]


def test_jump_identity(scalar_spec):
    """Phi x jumps by 1 + eta at the impulse instant whatever x"""

    grid = scalar_spec.grid(128)
    x = GridFunction.from_callable(grid, lambda t: 1.0 + 0.5 * np.sin(2 * np.pi * t))
    assert jump_identity_check(scalar_spec, x) < 1e-9


@pytest.mark.slow
def test_impulsive_solution(scalar_spec):
    """Positive periodic solution of the impulsive scalar system"""

    result = solve_fixed_point(scalar_spec, points=128, tol=1e-8)
    assert result.converged
    assert result.positivity_floor > 0
    solution = result.solution
    assert jump_identity_check(scalar_spec, solution) < 1e-9

    node = int(np.flatnonzero(np.isclose(solution.grid.t, 0.5))[0])
    assert solution.right[node, 0] == pytest.approx(1.2 * solution.left[node, 0])

    left, right = impulse_algebra.continuous_transform(scalar_spec, solution)
    assert right[node, 0] == pytest.approx(left[node, 0], rel=1e-9)


def random_cone_element(grid, sigma, rng, harmonics: int = 3):
    """x_i = M_i (sigma_i + (1 - sigma_i) r_i), r_i a random trigonometric polynomial in [0, 1]"""

    omega = grid.period
    columns = []
    for level in sigma:
        cos_coefs = rng.normal(size=harmonics)
        sin_coefs = rng.normal(size=harmonics)
        scale = np.sum(np.abs(cos_coefs)) + np.sum(np.abs(sin_coefs))
        orders = np.arange(1, harmonics + 1)

        def shape(t, a=cos_coefs, b=sin_coefs, norm=scale):
            phase = 2 * np.pi * np.outer(t, orders) / omega
            return 0.5 * (1.0 + (np.cos(phase) @ a + np.sin(phase) @ b) / norm)

        amplitude = rng.uniform(0.2, 3.0)
        columns.append(lambda t, r=shape, m=amplitude, s=level: m * (s + (1.0 - s) * r(t)))
    return GridFunction.from_callable(grid, lambda t: np.column_stack([f(t) for f in columns]))


@pytest.mark.slow
@pytest.mark.parametrize("entry_id", zoo.zoo_ids())
def test_zoo_cone_preserved(entry_id):
    """Phi maps random cone elements of every built-in system back into the cone"""

    spec = zoo.make_entry(entry_id).spec
    grid = spec.grid(128)
    cone = ConeParams.from_spec(spec)
    rng = np.random.default_rng(11)
    for _ in range(100):
        x = random_cone_element(grid, cone.sigma, rng)
        assert cone_membership(x, cone)[0]
        member, margin = cone_membership(apply_phi(spec, x), cone)
        assert member, f"{entry_id}: cone margin {margin}"


@pytest.mark.slow
@pytest.mark.parametrize("entry_id", zoo.zoo_ids())
def test_zoo_jump_identity(entry_id):
    """The jump identity holds on the default grid and on a four times finer one"""

    spec = zoo.make_entry(entry_id).spec
    cone = ConeParams.from_spec(spec)
    for points, tolerance in ((DEFAULT_POINTS, 1e-9), (4 * DEFAULT_POINTS, 1e-11)):
        grid = spec.grid(points)
        x = random_cone_element(grid, cone.sigma, np.random.default_rng(5))
        assert jump_identity_check(spec, x) <= tolerance


@pytest.mark.slow
@pytest.mark.parametrize("entry_id", zoo.zoo_ids())
def test_zoo_solution_simulates(entry_id):
    """The fixed point of Phi, used as history, is followed by the simulator for 3 periods"""

    spec = zoo.make_entry(entry_id).spec
    result = solve_fixed_point(spec, points=256)
    if not result.converged:
        pytest.skip(f"{entry_id}: no positive fixed point at 256 points")
    omega = spec.omega
    traj = integrate(spec, result.solution, 3 * omega, max_step=1e-2)
    assert sup_deviation(traj, result.solution, 0.0, 3 * omega) <= 1e-4
