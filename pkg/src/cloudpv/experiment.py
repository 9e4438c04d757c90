"""End-to-end evaluation: estimation, daily DA/HA forecasts and error tables."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from . import model
from .benchmarks import CcdPredictor, PvgmPredictor
from .estimation import InitConfig, Trajectory, run_estimation
from .forecast import OdnpPredictor, ParametricPredictor, ReplayWeather, day_ahead, hour_ahead, series_frame
from .metrics import METRIC_NAMES, all_metrics, power_std, rmse_daily
from .solar import DaylightCalendar, GeoLocation, SurfaceOrientation, interval_clear_sky

PARAMETRIC = ("N5", "N6", "L")
ALL_MODELS = PARAMETRIC + ("PVGM", "CCD", "ODNP")


@dataclass
class Plant:
    """Plant metadata; ``tilt=None`` falls back to the guideline orientation."""

    p_nom: float = 920.0
    latitude: float = 39.2
    longitude: float = 9.1
    tilt: float | None = 27.0
    azimuth: float = 0.0
    tz: str = "Europe/Rome"

    @property
    def location(self) -> GeoLocation:
        return GeoLocation(self.latitude, self.longitude)

    @property
    def orientation(self) -> SurfaceOrientation:
        if self.tilt is None:
            return SurfaceOrientation.guideline(self.latitude)
        return SurfaceOrientation(self.tilt, self.azimuth)


@dataclass
class ExperimentConfig:
    plant: Plant = field(default_factory=Plant)
    models: tuple = ALL_MODELS
    l0: float = 0.01
    r: float = 1e4
    mu4: float = 0.784
    mu5: float = -1.344
    mu0: tuple | None = None
    benchmark_l0: float = 10.0
    eval_start_day: int = 18
    rmse_d_start_day: int = 15
    ha_issue_offset: int = 0

    def __post_init__(self):
        if not self.models:
            raise ValueError("at least one model is required")
        bad = set(self.models) - set(ALL_MODELS)
        if bad:
            raise ValueError(f"unknown models: {sorted(bad)}")
        if self.eval_start_day < 1 or self.rmse_d_start_day < 1:
            raise ValueError("evaluation windows start at day 1 or later")

    def init_config(self) -> InitConfig:
        return InitConfig(p_nom=self.plant.p_nom, mu4=self.mu4, mu5=self.mu5, l0=self.l0, r=self.r, mu0=self.mu0)

    @classmethod
    def simulation(cls, **kw) -> "ExperimentConfig":
        """Synthetic-data setup: initial guess 75% of the true parameters."""
        kw.setdefault("mu0", tuple(0.75 * model.TRUE_PARAMS))
        return cls(**kw)

    @classmethod
    def real_data(cls, **kw) -> "ExperimentConfig":
        kw.setdefault("l0", 10.0)
        kw.setdefault("eval_start_day", 57)
        return cls(**kw)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Prepared:
    calendar: DaylightCalendar
    phi: np.ndarray
    power: np.ndarray
    cloud: np.ndarray
    temp: np.ndarray


def prepare(times, power, temp, cloud, plant: Plant, tau_s: float) -> Prepared:
    """Compute I0, the daylight calendar and regressors for a dataset."""
    I0 = interval_clear_sky(plant.location, plant.orientation, times, tau_s)
    cal = DaylightCalendar.from_series(times, I0, plant.tz, tau_s)
    i = cal.source_index
    power, temp, cloud = (np.asarray(a, dtype=float)[i] for a in (power, temp, cloud))
    return Prepared(cal, model.regressor(cal.irradiance, temp, cloud), power, cloud, temp)


@dataclass
class ExperimentResult:
    trajectories: dict
    forecasts: pd.DataFrame
    metrics: pd.DataFrame
    rmse_d: pd.DataFrame
    power_std: float
    timings: dict

    def metric(self, model_name: str, kind: str, name: str) -> float:
        m = self.metrics
        sel = m[(m.model == model_name) & (m.kind == kind) & (m.metric == name)]
        return float(sel.value.iloc[0]) if len(sel) else float("nan")

    def table(self, kind: str = "DA") -> pd.DataFrame:
        """Metric x model table for one forecast kind."""
        m = self.metrics[self.metrics.kind == kind]
        return m.pivot(index="metric", columns="model", values="value").reindex(list(METRIC_NAMES))


def build_predictors(prep: Prepared, cfg: ExperimentConfig, times_all=None, power_all=None):
    """Run the estimators and wrap each model as a predictor."""
    weather = ReplayWeather(prep.cloud, prep.temp)
    predictors, trajectories, timings = {}, {}, {}
    init = cfg.init_config()
    for name in cfg.models:
        t0 = time.perf_counter()
        if name in PARAMETRIC:
            traj = run_estimation(prep.phi, prep.power, name, init)
            predictors[name] = ParametricPredictor(traj, prep.calendar, weather)
            trajectories[name] = traj
        elif name == "PVGM":
            predictors[name] = PvgmPredictor(prep.power, cfg.benchmark_l0)
            trajectories[name] = predictors[name].trajectory
        elif name == "CCD":
            predictors[name] = CcdPredictor(prep.calendar.irradiance, prep.cloud, prep.power, weather, cfg.benchmark_l0)
            trajectories[name] = predictors[name].trajectory
        elif name == "ODNP":
            if times_all is None:
                times_all, power_all = prep.calendar.times, prep.power
            predictors[name] = OdnpPredictor(prep.calendar, times_all, power_all)
        timings[name] = time.perf_counter() - t0
    return predictors, trajectories, timings


def forecast_all(prep: Prepared, predictors: dict, cfg: ExperimentConfig, timings: dict | None = None):
    """Daily DA series for every model and one HA series per day (no ODNP)."""
    cal = prep.calendar
    lit = cal.lit_days
    series = []
    for name, pred in predictors.items():
        t0 = time.perf_counter()
        for d in lit:
            if cal.has_day(d - 1) and cal.has_day(d + 1):
                series.append(day_ahead(d, cal, pred))
        if name != "ODNP":
            for d in lit:
                idx = cal.indices(d)
                if cfg.ha_issue_offset < idx.size:
                    series.append(hour_ahead(int(idx[cfg.ha_issue_offset]), cal, pred))
        if timings is not None:
            timings[name] = timings.get(name, 0.0) + time.perf_counter() - t0
    return series_frame(series, cal, prep.power)


def evaluate_forecasts(forecasts: pd.DataFrame, p_nom: float, eval_start_day: int, rmse_d_start_day: int):
    """Metric rows, per-day RMSE and power std from a forecast table."""
    rows, daily = [], []
    for (name, kind), g in forecasts.groupby(["model", "kind"], sort=False):
        ev = g[g.target_day >= eval_start_day]
        for metric, value in all_metrics(ev.measured, ev.forecast, p_nom).items():
            rows.append({"model": name, "kind": kind, "metric": metric, "value": value})
        dg = g[g.target_day >= rmse_d_start_day]
        rd = rmse_daily(dg.target_day, dg.measured, dg.forecast)
        daily.append(pd.DataFrame({"model": name, "kind": kind, "day": rd.index, "RMSE_d": rd.to_numpy()}))
    metrics = pd.DataFrame(rows, columns=["model", "kind", "metric", "value"])
    rmse_d = pd.concat(daily, ignore_index=True) if daily else pd.DataFrame(columns=["model", "kind", "day", "RMSE_d"])
    da = forecasts[(forecasts.kind == "DA") & (forecasts.target_day >= rmse_d_start_day)]
    reference = da.drop_duplicates("j").measured if len(da) else forecasts.drop_duplicates("j").measured
    return metrics, rmse_d, power_std(reference)


def run_experiment(times, power, temp, cloud, cfg: ExperimentConfig, tau_s: float) -> ExperimentResult:
    prep = prepare(times, power, temp, cloud, cfg.plant, tau_s)
    predictors, trajectories, timings = build_predictors(prep, cfg, times, power)
    forecasts = forecast_all(prep, predictors, cfg, timings)
    metrics, rmse_d, pstd = evaluate_forecasts(forecasts, cfg.plant.p_nom, cfg.eval_start_day, cfg.rmse_d_start_day)
    return ExperimentResult(trajectories, forecasts, metrics, rmse_d, pstd, timings)


def run_dataset(dataset, cfg: ExperimentConfig) -> ExperimentResult:
    """:func:`run_experiment` on a :class:`~cloudpv.simulator.SyntheticDataset`."""
    return run_experiment(dataset.times, dataset.power, dataset.temp, dataset.cloud, cfg, dataset.tau_s)


def _mc_run(args):
    from .simulator import TrueSystem, simulate

    sid, seed, cfg = args
    plant = cfg.plant
    system = TrueSystem(p_nom=plant.p_nom, latitude=plant.latitude, longitude=plant.longitude,
                        tilt=plant.tilt if plant.tilt is not None else 27.0, azimuth=plant.azimuth, tz=plant.tz)
    res = run_dataset(simulate(sid, seed, system), cfg)
    m = res.metrics.copy()
    m["seed"] = seed
    m = pd.concat([m, pd.DataFrame([{"model": "-", "kind": "DA", "metric": "POWER_STD",
                                     "value": res.power_std, "seed": seed}])], ignore_index=True)
    return m


def run_monte_carlo(sid: int, runs: int = 10, cfg: ExperimentConfig | None = None, base_seed: int = 0,
                    workers: int = 1) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Repeat a simulated setup with independent seeds.

    Returns ``(per_run, mean)`` where ``per_run`` has one row per
    (seed, model, kind, metric) and ``mean`` averages over seeds.
    """
    cfg = cfg or ExperimentConfig.simulation()
    jobs = [(sid, base_seed + r, cfg) for r in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_mc_run, jobs))
    else:
        parts = [_mc_run(j) for j in jobs]
    per_run = pd.concat(parts, ignore_index=True)
    per_run["sid"] = sid
    mean = per_run.groupby(["sid", "model", "kind", "metric"], sort=False).value.mean().reset_index()
    return per_run, mean
