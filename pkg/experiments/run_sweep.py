#!/usr/bin/env python

"""
Sweep the planar autonomous example over a grid of periods and impulse sizes, and
record, for each pair, the planar criterion verdict against its closed form threshold.

With `--pipeline`, every pair also goes through the whole pipeline (criterion, fixed
point and simulation cross-check). Beware : this may take a long time.

"""

import argparse
import datetime as dt
import itertools
import math
from pathlib import Path

import numpy as np
import pandas as pd

from perisol import zoo
from perisol.criteria import make_checker
from perisol.exceptions import PerisolError
from perisol.pipeline import pipeline
from perisol.utils.config import RunSettings
from perisol.utils.report import write_csv


def prepare_result_directory():
    """Create a timestamped directory in "./results" where results of this sweep are stored"""

    dir_name = f"sweep__{dt.datetime.now().strftime('%d-%b-%y_%H-%M')}"

    results_path = Path(f"./results/{dir_name}")
    if results_path.exists():
        raise RuntimeError(f"Result directory {dir_name} already exists !")

    results_path.mkdir(parents=True)
    return results_path


def sweep_point(omega, eta, with_pipeline, settings):
    """One row of the sweep"""

    row = {
        "omega": omega,
        "eta": eta,
        "threshold": zoo.planar_threshold(omega),
    }
    try:
        spec = zoo.planar_autonomous_example(omega, eta=eta).spec
    except PerisolError as exc:
        row["error"] = str(exc)
        return row

    row["m1"] = zoo.planar_m1(omega, eta)
    row["m2"] = zoo.planar_m2(omega, eta)
    report = make_checker("T4_2_planar", points=settings.grid_points).check(spec)
    row["certified"] = report.verdict
    row["margin"] = report.margin
    row["expected"] = 0 < eta < row["threshold"]

    if with_pipeline:
        run = pipeline(spec, settings)
        row["verdict"] = run.verdict
        if run.fixed_point is not None:
            row["residual"] = run.fixed_point["residual"]
            row["positivity_floor"] = run.fixed_point["positivity_floor"]
        if run.simulation is not None:
            row["long_run_floor"] = min(run.simulation["long_run_floor"])
    return row


if __name__ == "__main__":

    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pipeline", action="store_true", help="Run the whole pipeline too")
    parser.add_argument("--points", type=int, default=11, help="Grid size along each axis")
    args = parser.parse_args()

    OMEGAS = np.linspace(0.1, 1.0, args.points)
    ETAS = np.linspace(0.0, 0.6, args.points)
    SETTINGS = RunSettings(grid_points=256, t_end=100.0, max_step=2e-2)

    EXP_DIR = prepare_result_directory()
    print(f"## Directory for sweep results is : {EXP_DIR}")
    print(f"## omega in [{OMEGAS[0]}, {OMEGAS[-1]}], eta in [{ETAS[0]}, {ETAS[-1]}]")
    print("___________________________________________________________________")

    rows = []
    for omega, eta in itertools.product(OMEGAS, ETAS):
        rows.append(sweep_point(float(omega), float(eta), args.pipeline, SETTINGS))
        print(f"omega={omega:.4f} eta={eta:.4f} : {rows[-1].get('certified')}")

    frame = pd.DataFrame(rows)
    write_csv(frame, EXP_DIR / "planar_sweep.csv")

    checked = frame.dropna(subset=["certified"])
    mismatches = checked[checked["certified"] != checked["expected"]]
    print(f"## {len(checked)} points checked, {len(mismatches)} off the closed form threshold")
    print(f"## ln 2 / 2 threshold : {zoo.planar_threshold(math.log(2) / 2):.6f}")
