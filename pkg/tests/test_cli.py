""" Tests for the perisol command line
"""

import io
import json

import pandas as pd
import pytest
from click.testing import CliRunner

from perisol.cli import cli


def run(*args):
    """Invoke the CLI, stderr messages mixed in the output"""
    return CliRunner().invoke(cli, list(args))


def json_output(result):
    """JSON document printed on stdout"""
    text = result.output
    return json.loads(text[text.index("{") : text.rindex("}") + 1])


def csv_output(result, header):
    """CSV table printed on stdout, starting at its header"""
    text = result.output
    return pd.read_csv(io.StringIO(text[text.index(header) :]))


def test_validate():
    """Hypothesis violations exit with status 2 and name the hypothesis"""

    assert run("validate", "tests/scalar_system.yml").exit_code == 0
    assert run("-s", "tests/settings.yml", "validate", "zoo:hematopoiesis").exit_code == 0

    result = run("validate", "tests/broken.yml")
    assert result.exit_code == 2
    assert "(H2)" in result.output

    assert run("validate", "zoo:planar_autonomous", "--eta", "1.5").exit_code == 2
    assert run("validate", "zoo:nope").exit_code == 2
    assert run("validate", "tests/scalar_system.yml", "--eta", "0.1").exit_code == 2


def test_bounds():
    """Bounds table as CSV or JSON"""

    result = run("bounds", "zoo:planar_autonomous", "--eta", "0.2")
    assert result.exit_code == 0
    frame = csv_output(result, "component,")
    assert frame["component"].tolist() == [1, 2]

    result = run("bounds", "tests/scalar_system.yml", "--json")
    assert result.exit_code == 0
    text = result.output
    rows = json.loads(text[text.index("[") : text.rindex("]") + 1])
    assert rows[0]["B_upper"] == 1.0


def test_certify(tmp_path):
    """Exit status follows the verdict, outputs are written on demand"""

    args = ["certify", "zoo:scalar_nicholson", "-t", "T3_3_average", "--search-v", "--json"]
    result = run(*args, "--out", str(tmp_path))
    assert result.exit_code == 0
    report = json_output(result)
    assert report["verdict"] == "pass"
    assert report["subcommand"] == "certify"
    assert "wall_time" not in report
    assert report["criteria"][0]["v_witness"] == [1.0]
    assert (tmp_path / "certify.json").exists()
    assert (tmp_path / "margins.csv").exists()

    failed = run("certify", "zoo:scalar_nicholson", "-t", "T3_3_average", "--eps", "0.2")
    assert failed.exit_code == 1


def test_certify_planar():
    """Planar criterion through an explicit scaling vector"""

    args = ["certify", "zoo:planar_autonomous", "-t", "T4_2_planar", "--v", "1,1"]
    assert run(*args, "--eta", "0.2").exit_code == 0
    assert run(*args, "--eta", "0.4").exit_code == 1
    assert run(*args[:-1], "1,-1", "--eta", "0.2").exit_code == 2


def test_certify_precondition():
    """A criterion outside of its scope is an input error"""

    assert run("certify", "zoo:planar_autonomous", "-t", "C_scalar").exit_code == 2
    assert run("certify", "zoo:mackey_glass", "-t", "T3_2_superlinear").exit_code == 2


def test_solve(tmp_path):
    """Constant solution of x' = -2 x + 4"""

    args = ["solve", "tests/constant_system.yml", "--grid", "64", "--damping", "1", "--json"]
    result = run(*args, "--out", str(tmp_path), "--emit-plot-data")
    assert result.exit_code == 0
    report = json_output(result)
    assert report["verdict"] == "converged"
    assert report["fixed_point"]["iterations"] == 2

    solution = pd.read_csv(tmp_path / "solution.csv")
    assert list(solution.columns) == ["t", "x1", "side"]
    assert solution["x1"].to_numpy() == pytest.approx(2.0)
    assert (tmp_path / "solution_long.csv").exists()


def test_simulate(tmp_path):
    """Trajectory and event files"""

    args = ["simulate", "zoo:planar_autonomous", "--eta", "0.2", "--t-end", "2", "--json"]
    result = run(*args, "--samples", "101", "--out", str(tmp_path))
    assert result.exit_code == 0
    report = json_output(result)
    assert report["simulation"]["t_end"] == 2.0
    assert report["simulation"]["events"] == 12

    trajectory = pd.read_csv(tmp_path / "trajectory.csv")
    assert list(trajectory.columns) == ["t", "x1", "x2"]
    assert len(trajectory) == 101
    events = pd.read_csv(tmp_path / "events.csv")
    assert len(events) == 12


def test_report():
    """Pipeline on the constant system with the limit profile criterion"""

    result = run("report", "tests/constant_system.yml", "-t", "T3_6_limits", "--json")
    assert result.exit_code == 0
    report = json_output(result)
    assert report["verdict"] == "certified+computed"
    assert report["inputs"]["source"] == "tests/constant_system.yml"


def test_zoo(tmp_path):
    """Built-in systems can be listed and written out"""

    result = run("zoo", "list")
    assert result.exit_code == 0
    assert "scalar_nicholson" in result.output

    path = tmp_path / "planar.yml"
    assert run("zoo", "emit", "planar_autonomous", "--eta", "0.1", "-o", str(path)).exit_code == 0
    assert run("validate", str(path)).exit_code == 0

    assert run("zoo", "emit", "nope").exit_code == 2
