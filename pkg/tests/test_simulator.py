""" Tests for perisol.simulator
"""

import math

import numpy as np
import pytest

from perisol import zoo
from perisol.exceptions import ModelError
from perisol.model.grid import GridFunction
from perisol.model.system import SystemSpec
from perisol.simulator import (
    Integrator,
    floor_trend,
    integrate,
    long_run_floor,
    periodicity_residual,
)


def linear_system(death, impulses=None):
    """x' = -death x with a vanishing birth table, optional linear impulses"""
    config = {
        "name": "linear",
        "period": 1.0,
        "dimension": 1,
        "death": [death],
        "nonlinearity": [
            {
                "kind": "custom_table",
                "terms": [{"beta": 1.0, "tau": 0.5, "table": [[0, 0], [1, 0]]}],
            }
        ],
    }
    if impulses:
        config["impulses"] = impulses
    return SystemSpec.from_dict(config)


def test_rk4_accuracy():
    """Fixed step RK4 on x' = -5 x, fourth order"""

    spec = linear_system(5.0)
    exact = math.exp(-5.0)
    errors = []
    for step in (1e-2, 5e-3, 2.5e-3):
        traj = integrate(spec, 1.0, 1.0, max_step=step)
        errors.append(abs(traj.evaluate(1.0)[0] - exact))
    assert traj.evaluate(1.0)[0] == pytest.approx(exact, rel=1e-6)
    for coarse, fine in zip(errors, errors[1:]):
        assert 12 <= coarse / fine <= 20


def test_pure_impulses():
    """Without dynamics the state doubles at every instant"""

    spec = linear_system(
        0.0, impulses={"instants": [0.5], "maps": [[{"kind": "linear", "eta": 1.0}]]}
    )
    traj = integrate(spec, 1.0, 2.75)
    assert traj.evaluate(2.75)[0] == pytest.approx(8.0)
    assert len(traj.events) == 3
    assert traj.evaluate(1.5, side="left")[0] == pytest.approx(2.0)
    assert traj.evaluate(1.5, side="right")[0] == pytest.approx(4.0)

    events = traj.events_frame()
    assert list(events.columns) == ["time", "component", "before", "jump"]
    assert events["time"].tolist() == pytest.approx([0.5, 1.5, 2.5])
    assert events["jump"].tolist() == pytest.approx([1.0, 2.0, 4.0])


def test_history_before_start():
    """Times before 0 read the history"""

    spec = linear_system(5.0)
    traj = integrate(spec, 3.0, 0.5)
    assert traj.evaluate(-0.25)[0] == pytest.approx(3.0)
    frame = traj.sample(points=11)
    assert list(frame.columns) == ["t", "x1"]
    assert frame["x1"].iloc[0] == pytest.approx(3.0)


def test_decay_summaries():
    """Floors of a decaying trajectory"""

    spec = linear_system(5.0)
    traj = integrate(spec, 1.0, 2.0)
    trend = floor_trend(traj)
    assert len(trend) == 4
    assert all(b < a for a, b in zip(trend, trend[1:]))
    assert long_run_floor(traj, 1.0)[0] == pytest.approx(math.exp(-10.0), rel=1e-5)
    assert periodicity_residual(traj, 1.0, 0.0) == pytest.approx(
        1.0 - math.exp(-5.0), rel=1e-5
    )
    with pytest.raises(ValueError):
        periodicity_residual(traj, 1.0, 0.5)
    with pytest.raises(ValueError):
        periodicity_residual(integrate(spec, 1.0, 1.5), 1.0, 0.0)
    with pytest.raises(ValueError):
        long_run_floor(traj, 3.0)


def test_invalid_runs():
    """Integration arguments"""

    spec = linear_system(5.0)
    with pytest.raises(ValueError):
        Integrator(spec, max_step=0.0)
    with pytest.raises(ValueError):
        integrate(spec, 1.0, 0.0)
    with pytest.raises(ModelError):
        integrate(spec, -1.0, 1.0)
    with pytest.raises(ModelError):
        Integrator(spec).run(GridFunction.constant(spec.grid(8), [1.0, 1.0]), 1.0)


def test_distributed_delay():
    """Window states of distributed birth functions stay consistent with the trajectory"""

    spec = zoo.nicholson_distributed_system(dimension=1, coupling=0.0).spec
    traj = integrate(spec, 1.0, 3.0, max_step=0.01)
    values = traj.sample(points=301)["x1"]
    assert values.min() > 0
    assert np.all(np.isfinite(values))


@pytest.mark.slow
def test_planar_extinction():
    """Without impulses the planar example decays towards 0"""

    spec = zoo.planar_autonomous_example(eta=0.0).spec
    traj = integrate(spec, 1.0, 200.0, max_step=0.02)
    trend = floor_trend(traj)
    assert all(b < a for a, b in zip(trend, trend[1:]))
    assert trend[-1] < 2e-2
