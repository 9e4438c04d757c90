"""Forecast error measures.

Every measure is computed on the pairs where both the measured and the
forecast power are strictly positive. MBE is ``mean(measured - forecast)``,
so a positive value means under-forecasting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

METRIC_NAMES = ("RMSE", "MAPE", "MBE", "R2", "NRMSE", "RMSE_NP", "MAPE_NP")


class MetricError(ValueError):
    """Raised when a measure is undefined for the given pairs."""


@dataclass(frozen=True)
class EvaluationSet:
    measured: np.ndarray
    predicted: np.ndarray
    p_nom: float = 1.0

    @classmethod
    def from_pairs(cls, measured, predicted, p_nom: float = 1.0) -> "EvaluationSet":
        m = np.asarray(measured, dtype=float)
        p = np.asarray(predicted, dtype=float)
        keep = np.isfinite(m) & np.isfinite(p) & (m > 0) & (p > 0)
        return cls(m[keep], p[keep], float(p_nom))

    def __len__(self):
        return self.measured.size

    def _require(self, n=1):
        if len(self) < n:
            raise MetricError(f"need at least {n} positive pairs, got {len(self)}")

    @property
    def errors(self) -> np.ndarray:
        return self.measured - self.predicted


def _as_set(measured, predicted=None, p_nom=1.0) -> EvaluationSet:
    if isinstance(measured, EvaluationSet):
        return measured
    return EvaluationSet.from_pairs(measured, predicted, p_nom)


def rmse(measured, predicted=None) -> float:
    s = _as_set(measured, predicted)
    s._require()
    return float(np.sqrt(np.mean(s.errors**2)))


def mbe(measured, predicted=None) -> float:
    s = _as_set(measured, predicted)
    s._require()
    return float(np.mean(s.errors))


def mape(measured, predicted=None) -> float:
    """Mean absolute percentage error, in percent."""
    s = _as_set(measured, predicted)
    s._require()
    return float(np.mean(np.abs(s.errors / s.measured)) * 100.0)


def _sums(s: EvaluationSet):
    s._require(2)
    sse = float(np.sum(s.errors**2))
    sst = float(np.sum((s.measured - s.measured.mean()) ** 2))
    if sst == 0.0:
        raise MetricError("measured power has zero variance")
    return sse, sst


def r2(measured, predicted=None) -> float:
    """Determination coefficient; negative when worse than the mean."""
    sse, sst = _sums(_as_set(measured, predicted))
    return 1.0 - sse / sst


def nrmse(measured, predicted=None) -> float:
    """``sqrt(SSE / SST)``, equal to ``sqrt(1 - R2)``, defined for R2 < 0 too."""
    sse, sst = _sums(_as_set(measured, predicted))
    return float(np.sqrt(sse / sst))


def rmse_np(measured, predicted=None, p_nom: float = 1.0) -> float:
    s = _as_set(measured, predicted, p_nom)
    return rmse(s) / s.p_nom


def mape_np(measured, predicted=None, p_nom: float = 1.0) -> float:
    """Mean absolute error relative to nominal power, in percent."""
    s = _as_set(measured, predicted, p_nom)
    s._require()
    return float(np.mean(np.abs(s.errors)) / s.p_nom * 100.0)


def all_metrics(measured, predicted=None, p_nom: float = 1.0) -> dict:
    """Every measure by name; undefined ones are NaN."""
    s = _as_set(measured, predicted, p_nom)
    funcs = {
        "RMSE": rmse, "MAPE": mape, "MBE": mbe, "R2": r2, "NRMSE": nrmse,
        "RMSE_NP": rmse_np, "MAPE_NP": mape_np,
    }
    out = {}
    for name, f in funcs.items():
        try:
            out[name] = f(s)
        except MetricError:
            out[name] = float("nan")
    out["K"] = len(s)
    return out


def rmse_daily(days, measured, predicted) -> pd.Series:
    """RMSE of each day's pairs; days without a valid pair are omitted."""
    df = pd.DataFrame({"day": np.asarray(days), "m": measured, "p": predicted})
    out = {}
    for d, g in df.groupby("day", sort=True):
        s = EvaluationSet.from_pairs(g["m"], g["p"])
        if len(s):
            out[d] = rmse(s)
    return pd.Series(out, name="RMSE_d", dtype=float).rename_axis("day")


def power_std(measured) -> float:
    """Sample standard deviation of measured power."""
    m = np.asarray(measured, dtype=float)
    m = m[np.isfinite(m)]
    if m.size < 2:
        raise MetricError("need at least two samples")
    return float(np.std(m, ddof=1))
