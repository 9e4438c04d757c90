"""Command line driver: ``cloudpv {simulate,ingest,run,evaluate,bench}``.

Configuration comes from an optional ``key = value`` file (``--config``)
and ``--set key=value`` overrides; ``--show-config`` prints the effective
values and exits.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import fields
from pathlib import Path

import pandas as pd

from . import experiment as ex
from . import io, simulator
from .estimation import trajectory_frame
from .ingest import merge_hourly, quality_report

log = logging.getLogger("cloudpv")

PLANT_KEYS = {f.name for f in fields(ex.Plant)}
CONFIG_KEYS = {f.name for f in fields(ex.ExperimentConfig)} - {"plant"}
RUN_KEYS = {"sid", "seed", "runs", "year", "workers"}


class CliError(Exception):
    pass


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def _convert(key: str, value):
    if not isinstance(value, str):
        return value
    if key == "models":
        return tuple(v.strip() for v in value.split(",") if v.strip())
    if key == "mu0":
        return None if value.lower() in ("", "none") else tuple(float(v) for v in value.split(","))
    if key == "tilt" and value.lower() in ("none", "guideline"):
        return None
    if key == "tz":
        return value
    if key in ("sid", "seed", "runs", "year", "workers", "eval_start_day", "rmse_d_start_day", "ha_issue_offset"):
        return int(value)
    return float(value)


def build_config(args) -> tuple[ex.ExperimentConfig, dict]:
    raw = {}
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise CliError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    unknown = set(raw) - PLANT_KEYS - CONFIG_KEYS - RUN_KEYS
    if unknown:
        raise CliError(f"unknown configuration keys: {sorted(unknown)}")
    values = {k: _convert(k, v) for k, v in raw.items()}
    plant = ex.Plant(**{k: v for k, v in values.items() if k in PLANT_KEYS})
    kw = {k: v for k, v in values.items() if k in CONFIG_KEYS}
    preset = getattr(args, "preset", None) or ("simulation" if getattr(args, "sid", None) is not None else "real")
    factory = ex.ExperimentConfig.simulation if preset == "simulation" else ex.ExperimentConfig.real_data
    run = {k: v for k, v in values.items() if k in RUN_KEYS}
    return factory(plant=plant, **kw), run


def _system(plant: ex.Plant) -> simulator.TrueSystem:
    return simulator.TrueSystem(
        p_nom=plant.p_nom, latitude=plant.latitude, longitude=plant.longitude,
        tilt=plant.tilt if plant.tilt is not None else 27.0, azimuth=plant.azimuth, tz=plant.tz,
    )


def cmd_simulate(args) -> int:
    cfg, run = build_config(args)
    sid = args.sid if args.sid is not None else run.get("sid", 0)
    seed = args.seed if args.seed is not None else run.get("seed", 0)
    year = run.get("year", 2015)
    simulator.scenario(sid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ds = simulator.simulate(sid, seed, _system(cfg.plant), year)
    io.write_dataset(ds, out / "dataset.csv")
    if args.nominal:
        weather_seed = ds.meta["weather_seed"]
        io.write_dataset(simulator.nominal_dataset(_system(cfg.plant), weather_seed, year), out / "nominal.csv")
    io.write_manifest(out, cfg.to_dict(), command="simulate", sid=sid, seed=seed, year=year,
                      weather_seed=ds.meta["weather_seed"], noise_seed=ds.meta["noise_seed"],
                      scenario=simulator.scenario(sid).__dict__, generator=ds.meta["weather"])
    print(f"wrote {len(ds)} samples (SID {sid}, seed {seed}) to {out / 'dataset.csv'}")
    return 0


def cmd_ingest(args) -> int:
    ds, rep = merge_hourly(args.power, args.cci, okta=args.okta)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_dataset(ds, out / "dataset.csv")
    (out / "quality.json").write_text(json.dumps(rep.as_dict(), indent=2) + "\n")
    io.write_manifest(out, {"power": str(args.power), "cci": str(args.cci), "okta": args.okta}, command="ingest")
    print(quality_report(rep))
    return 0


def _write_result(res: ex.ExperimentResult, out: Path, calendar=None):
    res.forecasts.to_csv(out / "forecasts.csv", index=False)
    res.metrics.to_csv(out / "metrics.csv", index=False)
    res.rmse_d.to_csv(out / "rmse_daily.csv", index=False)
    for name, traj in res.trajectories.items():
        trajectory_frame(traj, calendar).to_csv(out / f"trajectory_{name}.csv", index=False)
    for kind in ("DA", "HA"):
        if (res.metrics.kind == kind).any():
            res.table(kind).to_csv(out / f"table_{kind}.csv")


def cmd_run(args) -> int:
    cfg, run = build_config(args)
    if args.show_config:
        print(json.dumps({**cfg.to_dict(), **run}, indent=2, default=str))
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sid = args.sid if args.sid is not None else run.get("sid")
    runs = args.runs or run.get("runs", 1)
    seed = args.seed if args.seed is not None else run.get("seed", 0)
    if args.data:
        ds = io.read_dataset(args.data)
        if len(ds) == 0:
            raise CliError(f"{args.data}: dataset is empty")
        res = ex.run_dataset(ds, cfg)
        prep = ex.prepare(ds.times, ds.power, ds.temp, ds.cloud, cfg.plant, ds.tau_s)
        _write_result(res, out, prep.calendar)
        extra = {"data": str(args.data)}
    elif sid is not None:
        simulator.scenario(sid)
        if runs > 1:
            per_run, mean = ex.run_monte_carlo(sid, runs, cfg, seed, run.get("workers", args.workers))
            per_run.to_csv(out / "metrics_runs.csv", index=False)
            mean.to_csv(out / "metrics.csv", index=False)
            res = None
        else:
            ds = simulator.simulate(sid, seed, _system(cfg.plant), run.get("year", 2015))
            res = ex.run_dataset(ds, cfg)
            prep = ex.prepare(ds.times, ds.power, ds.temp, ds.cloud, cfg.plant, ds.tau_s)
            _write_result(res, out, prep.calendar)
        extra = {"sid": sid, "runs": runs, "base_seed": seed}
    else:
        raise CliError("run needs --data or --sid")
    io.write_manifest(out, cfg.to_dict(), command="run", **extra)
    if res is not None:
        for kind in ("DA", "HA"):
            if (res.metrics.kind == kind).any():
                print(f"{kind} forecast")
                print(res.table(kind).to_string(float_format=lambda v: f"{v:.4g}"))
    else:
        table = mean[mean.kind == "DA"].pivot(index="metric", columns="model", values="value")
        print(table.to_string(float_format=lambda v: f"{v:.4g}"))
    return 0


FORECAST_COLUMNS = {"model", "kind", "target_day", "j", "forecast", "measured"}


def cmd_evaluate(args) -> int:
    fc = pd.read_csv(args.forecasts)
    missing = FORECAST_COLUMNS - set(fc.columns)
    if missing:
        raise CliError(f"{args.forecasts}: schema mismatch, missing {sorted(missing)}")
    metrics, rmse_d, pstd = ex.evaluate_forecasts(fc, args.p_nom, args.eval_start_day, args.rmse_d_start_day)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    metrics.to_csv(out / "metrics.csv", index=False)
    rmse_d.to_csv(out / "rmse_daily.csv", index=False)
    pd.DataFrame({"power_std": [pstd]}).to_csv(out / "power_std.csv", index=False)
    io.write_manifest(out, {"forecasts": str(args.forecasts), "p_nom": args.p_nom,
                            "eval_start_day": args.eval_start_day, "rmse_d_start_day": args.rmse_d_start_day},
                      command="evaluate")
    for kind, g in metrics.groupby("kind", sort=False):
        print(f"{kind} forecast")
        print(g.pivot(index="metric", columns="model", values="value").to_string(float_format=lambda v: f"{v:.4g}"))
    print(f"power std: {pstd:.4g}")
    return 0


def cmd_bench(args) -> int:
    cfg, run = build_config(args)
    sid = args.sid if args.sid is not None else run.get("sid", 12)
    ds = simulator.simulate(sid, run.get("seed", 0), _system(cfg.plant))
    t0 = time.perf_counter()
    res = ex.run_dataset(ds, cfg)
    total = time.perf_counter() - t0
    print(f"{'model':<6} {'seconds':>10}")
    for name, t in res.timings.items():
        print(f"{name:<6} {t:10.3f}")
    print(f"{'total':<6} {total:10.3f}  ({len(ds)} samples, SID {sid})")
    return 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cloudpv", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a configuration key")
        sp.add_argument("--preset", choices=("simulation", "real"))

    s = sub.add_parser("simulate", help="generate a synthetic dataset")
    common(s)
    s.add_argument("--sid", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--nominal", action="store_true", help="also write the noise-free 15-minute data")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    g = sub.add_parser("ingest", help="merge power records and cloud reports into hourly data")
    g.add_argument("--power", required=True)
    g.add_argument("--cci", required=True)
    g.add_argument("--okta", action="store_true")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_ingest)

    r = sub.add_parser("run", help="estimate, forecast and evaluate")
    common(r)
    r.add_argument("--data", help="dataset CSV")
    r.add_argument("--sid", type=int, help="simulate this setup instead of reading data")
    r.add_argument("--seed", type=int)
    r.add_argument("--runs", type=int, help="Monte-Carlo repetitions (simulation only)")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--show-config", action="store_true")
    r.add_argument("--out", default="out")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("evaluate", help="recompute error tables from a forecasts CSV")
    e.add_argument("--forecasts", required=True)
    e.add_argument("--p-nom", type=float, default=920.0)
    e.add_argument("--eval-start-day", type=int, default=18)
    e.add_argument("--rmse-d-start-day", type=int, default=15)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("bench", help="time estimation and forecasting per model")
    common(b)
    b.add_argument("--sid", type=int)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, ArithmeticError) as exc:
        print(f"cloudpv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
