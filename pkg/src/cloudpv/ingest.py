"""Merge plant power records and irregular cloud cover reports into hourly data.

Input schemas::

    power:  timestamp,power_kw,temp_c   (hourly, temp_c is a forecast)
    cloud:  timestamp,cci               (irregular; fraction or okta)

Timestamps are ISO-8601 with an offset. Each output hour holds the power
and temperature of that hour and the mean of the cloud reports falling in
it; hours without any cloud report are dropped.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from .simulator import SyntheticDataset

log = logging.getLogger(__name__)


@dataclass
class QualityReport:
    power_rows: int = 0
    power_unparseable: int = 0
    power_duplicates: int = 0
    negative_power: int = 0
    cci_rows: int = 0
    cci_unparseable: int = 0
    cci_out_of_range: int = 0
    cci_averaged_hours: int = 0
    hours_without_cci: int = 0
    merged_hours: int = 0

    def as_dict(self) -> dict:
        return asdict(self)

    def power_rows_accounted(self) -> int:
        return self.power_unparseable + self.power_duplicates + self.hours_without_cci + self.merged_hours


def _parse(df: pd.DataFrame, columns: list[str]):
    """Coerce columns; returns (clean frame, number of rejected rows)."""
    out = pd.DataFrame({"timestamp": pd.to_datetime(df["timestamp"], utc=True, errors="coerce", format="ISO8601")})
    for c in columns:
        out[c] = pd.to_numeric(df[c], errors="coerce")
    bad = out.isna().any(axis=1)
    return out[~bad], int(bad.sum())


def load_power(path_or_frame) -> pd.DataFrame:
    df = pd.read_csv(path_or_frame, dtype=str) if not isinstance(path_or_frame, pd.DataFrame) else path_or_frame
    missing = {"timestamp", "power_kw", "temp_c"} - set(df.columns)
    if missing:
        raise ValueError(f"power records lack columns {sorted(missing)}")
    return df


def load_cci(path_or_frame) -> pd.DataFrame:
    df = pd.read_csv(path_or_frame, dtype=str) if not isinstance(path_or_frame, pd.DataFrame) else path_or_frame
    missing = {"timestamp", "cci"} - set(df.columns)
    if missing:
        raise ValueError(f"cloud reports lack columns {sorted(missing)}")
    return df


def merge_hourly(power, cci, okta: bool = False) -> tuple[SyntheticDataset, QualityReport]:
    """Build the hourly dataset from power records and cloud cover reports.

    Args:
        power: frame or CSV path with ``timestamp,power_kw,temp_c``.
        cci: frame or CSV path with ``timestamp,cci``.
        okta: cloud cover is given in okta (0-8) instead of a fraction.

    Unparseable rows and out-of-range cloud reports are skipped and counted.
    Duplicate power records for an hour are averaged.
    """
    rep = QualityReport()
    p_raw = load_power(power)
    c_raw = load_cci(cci)
    rep.power_rows, rep.cci_rows = len(p_raw), len(c_raw)

    p, rep.power_unparseable = _parse(p_raw, ["power_kw", "temp_c"])
    c, rep.cci_unparseable = _parse(c_raw, ["cci"])
    if okta:
        c["cci"] = c["cci"] / 8.0
    in_range = (c["cci"] >= 0.0) & (c["cci"] <= 1.0)
    rep.cci_out_of_range = int((~in_range).sum())
    c = c[in_range]
    rep.negative_power = int((p["power_kw"] < 0).sum())

    p = p.assign(hour=p["timestamp"].dt.floor("h")).groupby("hour")[["power_kw", "temp_c"]].mean()
    rep.power_duplicates = rep.power_rows - rep.power_unparseable - len(p)
    counts = c.assign(hour=c["timestamp"].dt.floor("h")).groupby("hour")["cci"].agg(["mean", "size"])
    rep.cci_averaged_hours = int((counts.loc[counts.index.isin(p.index), "size"] > 1).sum())

    merged = p.join(counts["mean"].rename("cloud"), how="inner").sort_index()
    rep.merged_hours = len(merged)
    rep.hours_without_cci = len(p) - len(merged)
    for name, n in rep.as_dict().items():
        if n and name not in ("power_rows", "cci_rows", "merged_hours"):
            log.info("ingest: %s = %d", name, n)
    if merged.empty:
        log.warning("ingest: power and cloud cover records do not overlap; dataset is empty")

    ds = SyntheticDataset(
        pd.DatetimeIndex(merged.index, name="timestamp"),
        merged["power_kw"].to_numpy(float),
        merged["temp_c"].to_numpy(float),
        merged["cloud"].to_numpy(float),
        60.0,
        meta={"source": "ingest"},
    )
    return ds, rep


def quality_report(rep: QualityReport) -> str:
    """Human-readable summary of a merge."""
    lines = [f"{k}: {v}" for k, v in rep.as_dict().items()]
    share = rep.hours_without_cci / max(rep.merged_hours + rep.hours_without_cci, 1)
    lines.append(f"dropped share: {share:.1%}")
    return "\n".join(lines)
