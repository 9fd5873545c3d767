""" Tests for perisol.utils.report
"""

import numpy as np
import pandas as pd
import pytest

from perisol import impulse_algebra, zoo
from perisol.criteria import make_checker
from perisol.criteria.base import CriterionReport, TheoremId
from perisol.model.grid import GridFunction
from perisol.model.system import load_system
from perisol.pipeline import RunReport
from perisol.utils.report import (
    CriterionReportSchema,
    RunReportSchema,
    bounds_frame,
    conditions_frame,
    dump_json,
    long_format,
    solution_frame,
    to_csv_text,
    write_csv,
)


@pytest.fixture
def planar_report():
    """Passing planar criterion report"""
    return make_checker("T4_2_planar").check(zoo.planar_autonomous_example(eta=0.2).spec)


def test_criterion_schema(planar_report):
    """Criterion reports load back into CriterionReport objects"""

    data = CriterionReportSchema().dump(planar_report)
    assert data["theorem_id"] == "T4_2_planar"
    loaded = CriterionReportSchema().load(data)
    assert isinstance(loaded, CriterionReport)
    assert loaded.theorem_id is TheoremId.T4_2_PLANAR
    assert loaded.verdict
    assert [c.name for c in loaded.conditions] == [c.name for c in planar_report.conditions]
    assert data == planar_report.to_dict()


def test_run_report(planar_report):
    """Run reports serialise to stable JSON, without wall time when deterministic"""

    run = RunReport(
        spec_digest="abc",
        subcommand="certify",
        inputs={"theorem": "T4_2_planar"},
        criteria=[planar_report],
        verdict="pass",
        wall_time=1.5,
    )
    assert "wall_time" not in run.to_dict()
    assert run.to_dict(deterministic=False)["wall_time"] == 1.5
    assert run.to_json() == run.to_json()
    assert run.certified

    loaded = RunReportSchema().load(run.to_dict())
    assert isinstance(loaded, RunReport)
    assert loaded.verdict == "pass"
    assert loaded.criteria[0].theorem_id is TheoremId.T4_2_PLANAR


def test_dump_json():
    """numpy values are written as plain numbers, keys sorted"""

    text = dump_json({"b": np.float64(0.5), "a": np.arange(2)})
    assert text == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": 0.5\n}'


def test_csv_format(tmp_path):
    """Floats are written with 17 significant digits"""

    frame = pd.DataFrame({"x": [0.1]})
    assert to_csv_text(frame) == "x\n0.10000000000000001\n"
    path = write_csv(frame, tmp_path / "out" / "x.csv")
    assert pd.read_csv(path)["x"].iloc[0] == 0.1


def test_tables(planar_report):
    """Components are numbered from 1 in tables"""

    margins = conditions_frame(planar_report)
    assert list(margins.columns[:3]) == ["name", "component", "branch"]
    assert sorted(margins["component"].unique()) == [1, 2]

    bounds = bounds_frame(impulse_algebra.bounds(zoo.planar_autonomous_example().spec))
    assert bounds["component"].tolist() == [1, 2]
    assert "m1" in bounds.columns


def test_solution_frame():
    """Right limits are only listed where the function jumps, t = 0 and t = omega included"""

    spec = load_system("tests/scalar_system.yml")
    grid = spec.grid(64)
    left = np.where((grid.t > 0.5)[:, None], 1.2, 1.0)
    right = np.where((grid.t >= 0.5)[:, None], 1.2, 1.0)
    frame = solution_frame(GridFunction(grid, left, right))

    assert list(frame.columns) == ["t", "x1", "side"]
    assert len(frame) == grid.size + 3
    rows = frame[np.isclose(frame["t"], 0.5)]
    assert rows["side"].tolist() == ["left", "right"]
    assert rows["x1"].tolist() == pytest.approx([1.0, 1.2])

    long = long_format(frame)
    assert list(long.columns) == ["t", "component", "value", "side"]
    assert set(long["component"]) == {1}
