""" Tests for perisol.pipeline
"""

import pytest

from perisol import zoo
from perisol.criteria.base import TheoremId
from perisol.exceptions import ModelError
from perisol.model.system import load_system
from perisol.pipeline import (
    CERTIFIED_COMPUTED,
    NOT_CERTIFIED,
    candidate_criteria,
    pipeline,
    stage,
)
from perisol.utils.config import RunSettings
from perisol.utils.logging import get_perisol_logger

FAST = RunSettings(grid_points=128, t_end=40.0, max_step=2e-2)


def test_candidates():
    """Criteria are chosen from the nonlinearity kinds"""

    spec = zoo.hematopoiesis_system().spec
    assert candidate_criteria(spec) == [TheoremId.T4_1_HEMATOPOIESIS]
    planar = candidate_criteria(zoo.planar_autonomous_example().spec)
    assert planar[0] is TheoremId.T4_2_PLANAR


def test_stage_tag():
    """Errors raised inside a stage carry its name"""

    with pytest.raises(ModelError) as err:
        with stage("solve", get_perisol_logger()):
            raise ModelError("boom")
    assert err.value.stage == "solve"


def test_constant_system():
    """Certified and computed, the cross-check stays on the constant solution"""

    spec = load_system("tests/constant_system.yml")
    report = pipeline(spec, FAST, theorem_ids=["T3_6_limits"])
    assert report.verdict == CERTIFIED_COMPUTED
    assert report.fixed_point["converged"]
    assert report.simulation["sup_deviation"] < 1e-6
    assert report.simulation["periodicity_residual"] < 1e-6
    assert report.spec_digest == spec.digest()
    assert "wall_time" not in report.to_dict()


@pytest.mark.slow
def test_scalar_nicholson():
    """Scalar Nicholson example : certified and computed"""

    report = pipeline(zoo.scalar_nicholson_example().spec, FAST)
    assert report.verdict == CERTIFIED_COMPUTED
    assert report.criteria[-1].verdict
    assert report.fixed_point["positivity_floor"] > 0


@pytest.mark.slow
def test_planar_impulsive():
    """Impulses below the threshold sustain a positive periodic solution"""

    settings = RunSettings(grid_points=256, t_end=40.0, max_step=1e-2)
    report = pipeline(zoo.planar_autonomous_example(eta=0.2).spec, settings)
    assert report.verdict == CERTIFIED_COMPUTED
    assert report.criteria[-1].theorem_id is TheoremId.T4_2_PLANAR
    assert report.fixed_point["jump_identity"] < 1e-9
    assert report.fixed_point["positivity_floor"] > 0
    assert report.simulation["periodicity_residual"] <= 1e-5


@pytest.mark.slow
def test_planar_extinction():
    """Without impulses no criterion holds and trajectories decay"""

    settings = RunSettings(grid_points=128, t_end=200.0, max_step=2e-2)
    report = pipeline(zoo.planar_autonomous_example(eta=0.0).spec, settings)
    assert report.verdict == NOT_CERTIFIED
    assert not report.certified
    assert any("extinction" in note for note in report.notes)
