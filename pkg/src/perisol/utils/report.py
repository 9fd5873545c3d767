""" Perisol
    Machine readable outputs : marshmallow schemas for reports, JSON and CSV writers
"""

import json
import pathlib

import numpy as np
import pandas as pd
from marshmallow import Schema, fields, post_load
from marshmallow_enum import EnumField

from perisol.criteria.base import ConditionResult, CriterionReport, TheoremId

CSV_FLOAT_FORMAT = "%.17g"


class ConditionResultSchema(Schema):
    """Marshmallow schema for ConditionResult class"""

    name = fields.Str()
    component = fields.Int()
    value = fields.Float(allow_nan=True)
    bound = fields.Float(allow_nan=True)
    relation = fields.Str()
    slack = fields.Float(allow_nan=True)
    passed = fields.Bool()
    at = fields.Float(allow_none=True)
    branch = fields.Str()

    @post_load
    def make_condition(self, data, **kwargs):  # pylint: disable=no-self-use,unused-argument
        """Deserialise into a ConditionResult object rather than a validated dict"""
        return ConditionResult(**data)


class CriterionReportSchema(Schema):
    """Marshmallow schema for CriterionReport class"""

    theorem_id = EnumField(TheoremId, by_value=True)
    v_witness = fields.List(fields.Float(), allow_none=True)
    conditions = fields.List(fields.Nested(ConditionResultSchema))
    verdict = fields.Bool()
    margin = fields.Float(allow_nan=True)
    grid_points = fields.Int()
    eps = fields.Float(allow_none=True)
    branches = fields.Dict(keys=fields.Str(), values=fields.Bool())
    notes = fields.List(fields.Str())

    @post_load
    def make_report(self, data, **kwargs):  # pylint: disable=no-self-use,unused-argument
        """Deserialise into a CriterionReport object rather than a validated dict"""
        return CriterionReport(**data)


class FixedPointSummarySchema(Schema):
    """Scalar outcome of the fixed point iteration"""

    residual = fields.Float(allow_nan=True)
    iterations = fields.Int()
    cone_check = fields.Bool()
    positivity_floor = fields.Float(allow_nan=True)
    converged = fields.Bool()
    damping = fields.Float()
    collapsed = fields.Bool()
    jump_identity = fields.Float(allow_none=True)


class SimulationSummarySchema(Schema):
    """Scalar outcome of one simulation"""

    t_end = fields.Float()
    max_step = fields.Float()
    periodicity_residual = fields.Float(allow_none=True, allow_nan=True)
    long_run_floor = fields.List(fields.Float())
    events = fields.Int()
    sup_deviation = fields.Float(allow_none=True, allow_nan=True)
    floor_trend = fields.List(fields.Float())


class RunReportSchema(Schema):
    """Marshmallow schema for RunReport class"""

    tool_version = fields.Str()
    spec_digest = fields.Str()
    subcommand = fields.Str()
    inputs = fields.Dict()
    criteria = fields.List(fields.Nested(CriterionReportSchema))
    fixed_point = fields.Nested(FixedPointSummarySchema, allow_none=True)
    simulation = fields.Nested(SimulationSummarySchema, allow_none=True)
    verdict = fields.Str(allow_none=True)
    notes = fields.List(fields.Str())
    wall_time = fields.Float(allow_none=True)

    @post_load
    def make_run_report(self, data, **kwargs):  # pylint: disable=no-self-use,unused-argument
        """Deserialise into a RunReport object rather than a validated dict"""
        from perisol.pipeline import RunReport  # pylint: disable=import-outside-toplevel

        return RunReport(**data)


def _plain(value):
    """numpy scalars and arrays to plain python values, for json"""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def dump_json(data) -> str:
    """Stable JSON text : sorted keys, 2 spaces indent"""
    return json.dumps(_plain(data), sort_keys=True, indent=2)


def write_json(data, path):
    """Write stable JSON to a file, parent directories created"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(data) + "\n", encoding="utf-8")
    return path


def write_csv(frame: pd.DataFrame, path):
    """Write a DataFrame with the fixed 17 significant digits float format"""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path


def to_csv_text(frame: pd.DataFrame) -> str:
    """CSV text of a DataFrame with the fixed float format"""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT)


def conditions_frame(report: CriterionReport) -> pd.DataFrame:
    """Margin table of a criterion report, one row per condition"""
    columns = ["name", "component", "branch", "relation", "value", "bound", "slack", "passed", "at"]
    rows = [condition.to_dict() for condition in report.conditions]
    frame = pd.DataFrame(rows, columns=columns)
    frame["component"] = frame["component"] + 1
    return frame


def bounds_frame(bounds) -> pd.DataFrame:
    """ImpulseBounds table, one row per component"""
    frame = pd.DataFrame([bound.to_dict() for bound in bounds])
    frame["component"] = frame["component"] + 1
    return frame


def solution_frame(solution, breaks_only_right: bool = True) -> pd.DataFrame:
    """Grid function as rows t, x1..xn, side

    Every node gives a left row, nodes where the function jumps also give a right row.
    """

    grid = solution.grid
    names = [f"x{i + 1}" for i in range(solution.dimension)]
    left = pd.DataFrame(solution.left, columns=names)
    left.insert(0, "t", grid.t)
    left["side"] = "left"

    jumps = np.any(solution.right != solution.left, axis=1)
    if breaks_only_right:
        right_rows = solution.right[jumps]
        right_times = grid.t[jumps]
    else:
        right_rows, right_times = solution.right, grid.t
    right = pd.DataFrame(right_rows, columns=names)
    right.insert(0, "t", right_times)
    right["side"] = "right"

    frame = pd.concat([left, right], ignore_index=True)
    return frame.sort_values(["t", "side"], kind="mergesort", ignore_index=True)


def long_format(frame: pd.DataFrame) -> pd.DataFrame:
    """Wide t, x1..xn[, side] frame to long t, component, value, side rows for plotting"""
    if "side" not in frame:
        frame = frame.assign(side="left")
    long = frame.melt(id_vars=["t", "side"], var_name="component", value_name="value")
    long["component"] = long["component"].str.lstrip("x").astype(int)
    return long[["t", "component", "value", "side"]]
