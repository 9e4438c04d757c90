"""Autoregressive benchmark predictors estimated online by least squares.

PVGM regresses power on its 12 previous daylight samples. CCD regresses
power on clear-sky irradiance and cloud cover at lags 0, 1 and 2. Lags
count daylight indices, so they may reach into the previous day. Neither
model has an intercept.
"""

from __future__ import annotations

import numpy as np

from .estimation import RlsState, Trajectory, rls_step

PVGM_LAGS = 12
CCD_LAGS = 2


def _run_rls(regressors, power, l0: float, valid) -> Trajectory:
    n = regressors.shape[1]
    state = RlsState(np.zeros(n), l0 * np.eye(n))
    est = np.empty((len(power) + 1, n))
    est[0] = state.theta
    innov = np.full(len(power), np.nan)
    for j in range(len(power)):
        if valid[j]:
            innov[j] = power[j] - regressors[j] @ state.theta
            state = benchmark_update(state, regressors[j], power[j])
        est[j + 1] = state.theta
    return Trajectory("", est, innov, ~valid, state)


def benchmark_update(state: RlsState, regressor, power: float) -> RlsState:
    """One least-squares step with a realized regressor."""
    return rls_step(state, regressor, power)


def pvgm_regressors(power) -> np.ndarray:
    """Rows ``[P(j-1), ..., P(j-12)]``; NaN where history is too short."""
    power = np.asarray(power, dtype=float)
    out = np.full((power.size, PVGM_LAGS), np.nan)
    for i in range(1, PVGM_LAGS + 1):
        out[i:, i - 1] = power[:-i]
    return out


def ccd_regressors(irradiance, cloud) -> np.ndarray:
    """Rows ``[I0(j), I0(j-1), I0(j-2), N(j), N(j-1), N(j-2)]``."""
    irradiance = np.asarray(irradiance, dtype=float)
    cloud = np.asarray(cloud, dtype=float)
    out = np.full((irradiance.size, 2 * (CCD_LAGS + 1)), np.nan)
    for i in range(CCD_LAGS + 1):
        out[i:, i] = irradiance[: irradiance.size - i]
        out[i:, CCD_LAGS + 1 + i] = cloud[: cloud.size - i]
    return out


class PvgmPredictor:
    """AR(12) power model.

    Args:
        power: measured daylight power, indexed like the calendar.
        l0: initial RLS weight scale; coefficients start at zero.
    """

    name = "PVGM"

    def __init__(self, power, l0: float = 10.0):
        self.power = np.asarray(power, dtype=float)
        phi = pvgm_regressors(self.power)
        valid = np.all(np.isfinite(phi), axis=1) & np.isfinite(self.power)
        self.trajectory = _run_rls(np.nan_to_num(phi), self.power, l0, valid)
        self.trajectory.variant = self.name

    def predict(self, js, k: int, q: int) -> np.ndarray:
        """Recursive multi-step prediction.

        Lags at or before ``k`` use measurements, later ones use the
        model's own (clamped) predictions.
        """
        js = np.asarray(js, dtype=int)
        if js.size == 0:
            return np.zeros(0)
        a = self.trajectory.estimates[q + 1]
        top = int(js.max())
        start = k + 1
        pred = {}
        for j in range(min(start, int(js.min())), top + 1):
            lags = np.empty(PVGM_LAGS)
            for i in range(1, PVGM_LAGS + 1):
                t = j - i
                if t < 0:
                    lags[i - 1] = np.nan
                elif t <= k:
                    lags[i - 1] = self.power[t]
                else:
                    lags[i - 1] = max(pred[t], 0.0)
            pred[j] = float(a @ lags)
        return np.array([pred[j] for j in js])


class CcdPredictor:
    """ARX(2) model on clear-sky irradiance and cloud cover.

    Cloud cover at or before ``k`` is the recorded value, later values come
    from the weather provider.
    """

    name = "CCD"

    def __init__(self, irradiance, cloud, power, weather=None, l0: float = 10.0):
        self.irradiance = np.asarray(irradiance, dtype=float)
        self.cloud = np.asarray(cloud, dtype=float)
        self.weather = weather
        power = np.asarray(power, dtype=float)
        phi = ccd_regressors(self.irradiance, self.cloud)
        valid = np.all(np.isfinite(phi), axis=1) & np.isfinite(power)
        self.trajectory = _run_rls(np.nan_to_num(phi), power, l0, valid)
        self.trajectory.variant = self.name

    def predict(self, js, k: int, q: int) -> np.ndarray:
        js = np.asarray(js, dtype=int)
        if js.size == 0:
            return np.zeros(0)
        b = self.trajectory.estimates[q + 1]
        out = np.empty(js.size)
        for n, j in enumerate(js):
            lags = np.arange(j, j - CCD_LAGS - 1, -1)
            if lags[-1] < 0:
                out[n] = np.nan
                continue
            cloud = self.cloud[lags].copy()
            future = lags > k
            if future.any() and self.weather is not None:
                cloud[future] = self.weather.forecast(lags[future], k)[0]
            out[n] = b @ np.r_[self.irradiance[lags], cloud]
        return out
