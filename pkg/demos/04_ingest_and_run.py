"""
From raw records to forecasts
=============================

Writes small power and cloud report files, merges them into an hourly
dataset and runs the day-ahead evaluation on it. Real plant records use
the same two file layouts.
"""

import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from cloudpv import simulator
from cloudpv.experiment import ExperimentConfig, run_dataset
from cloudpv.ingest import merge_hourly, quality_report

rng = np.random.default_rng(0)
tmp = Path(tempfile.mkdtemp())

# hourly power and temperature from a simulated plant
ds = simulator.simulate(12, seed=3)
stamp = ds.times.strftime("%Y-%m-%dT%H:%M:%S+00:00")
pd.DataFrame({"timestamp": stamp, "power_kw": ds.power.round(2), "temp_c": ds.temp.round(1)}).to_csv(
    tmp / "power.csv", index=False)

# cloud reports at irregular minutes, some hours missing, some reported twice
n = len(ds)
offsets = pd.to_timedelta(rng.integers(0, 60, n), unit="min")
keep = rng.random(n) > 0.05
reports = pd.DataFrame({"timestamp": (ds.times + offsets)[keep].strftime("%Y-%m-%dT%H:%M:%S+00:00"),
                        "cci": ds.cloud[keep]})
twice = reports.sample(frac=0.1, random_state=1)
pd.concat([reports, twice]).to_csv(tmp / "cci.csv", index=False)

merged, report = merge_hourly(tmp / "power.csv", tmp / "cci.csv")
print(quality_report(report))

res = run_dataset(merged, ExperimentConfig.real_data(models=("N5", "L", "ODNP")))
print(res.table("DA").to_string(float_format=lambda v: f"{v:.4g}"))
