"""
Day-ahead and hour-ahead forecasts on a noisy year
==================================================

Simulates the setup with noise on every channel, runs all six models and
prints the error tables. The parametric models should sit far below the
naive one-day-ahead predictor.
"""

from cloudpv import simulator
from cloudpv.experiment import ExperimentConfig, run_dataset

ds = simulator.simulate(12, seed=0)
res = run_dataset(ds, ExperimentConfig.simulation())

for kind in ("DA", "HA"):
    print(f"\n{kind} forecast")
    print(res.table(kind).to_string(float_format=lambda v: f"{v:.4g}"))
print(f"\nstandard deviation of the measured power: {res.power_std:.1f} kW")

# daily RMSE of the day-ahead forecast for the first two weeks scored
rd = res.rmse_d[res.rmse_d.kind == "DA"].pivot(index="day", columns="model", values="RMSE_d")
print(rd.head(14).round(1).to_string())
