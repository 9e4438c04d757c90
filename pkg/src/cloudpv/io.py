"""CSV datasets and run manifests."""

from __future__ import annotations

import hashlib
import json
import platform
from pathlib import Path

import numpy as np
import pandas as pd

from .simulator import SyntheticDataset

DATASET_COLUMNS = ["timestamp", "power_kw", "temp_c", "cloud"]


def write_dataset(ds: SyntheticDataset, path) -> Path:
    path = Path(path)
    df = pd.DataFrame({
        "timestamp": ds.times.strftime("%Y-%m-%dT%H:%M:%S%z").str.replace(r"(\d{2})(\d{2})$", r"\1:\2", regex=True),
        "power_kw": ds.power,
        "temp_c": ds.temp,
        "cloud": ds.cloud,
    })
    df.to_csv(path, index=False)
    return path


def read_dataset(path, tau_s: float | None = None) -> SyntheticDataset:
    """Load a dataset CSV (``timestamp,power_kw,temp_c,cloud``)."""
    df = pd.read_csv(path)
    missing = set(DATASET_COLUMNS) - set(df.columns)
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    times = pd.DatetimeIndex(pd.to_datetime(df["timestamp"], utc=True))
    if len(times) > 1 and np.any(np.diff(times.asi8) <= 0):
        raise ValueError(f"{path}: timestamps must be strictly increasing")
    if tau_s is None:
        tau_s = float(np.median(np.diff(times.asi8)) / 6e10) if len(times) > 1 else 60.0
    return SyntheticDataset(
        times,
        df["power_kw"].to_numpy(float),
        df["temp_c"].to_numpy(float),
        df["cloud"].to_numpy(float),
        tau_s,
    )


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_manifest(directory, config: dict, **extra) -> Path:
    """Write ``manifest.json`` describing how the directory was produced."""
    from . import __version__

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = {
        "config": config,
        "config_hash": config_hash(config),
        "versions": {
            "cloudpv": __version__,
            "numpy": np.__version__,
            "pandas": pd.__version__,
            "python": platform.python_version(),
        },
        **extra,
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
    return path


def read_manifest(directory) -> dict:
    return json.loads((Path(directory) / "manifest.json").read_text())
