"""Day-ahead and hour-ahead power forecasts.

A predictor turns ``(targets j, issue index k, estimate index q)`` into raw
power predictions; :func:`day_ahead` and :func:`hour_ahead` choose the index
sets and estimate indices and clamp the result at zero. All indices are
daylight indices of a :class:`~cloudpv.solar.DaylightCalendar`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from . import model
from .estimation import Trajectory
from .solar import DaylightCalendar

DA_SUBMISSION_HOUR = 6
HA_LEAD = pd.Timedelta(minutes=105)
HA_HORIZON = pd.Timedelta(hours=7)


class ReplayWeather:
    """Weather "forecasts" that replay the recorded reports.

    ``forecast(j, k)`` returns ``(N(j), T(j))`` whatever the issue time.
    """

    def __init__(self, cloud, temp):
        self.cloud = np.asarray(cloud, dtype=float)
        self.temp = np.asarray(temp, dtype=float)

    def forecast(self, j, k=None):
        j = np.asarray(j)
        if np.any((j < 0) | (j >= self.cloud.size)):
            raise IndexError("no weather forecast for the requested index")
        return self.cloud[j], self.temp[j]


@dataclass
class ForecastSeries:
    """One forecast issued at daylight index ``issue`` with estimate ``q``.

    ``power`` is clamped at zero, ``raw`` keeps the model output.
    ``day`` is the submission day for DA forecasts.
    """

    kind: str
    issue: int
    q: int
    j: np.ndarray
    power: np.ndarray
    raw: np.ndarray
    day: int | None = None
    model: str = ""

    def __len__(self):
        return self.j.size


class ParametricPredictor:
    """Predictions of an N5/N6/L model from its estimate trajectory."""

    def __init__(self, trajectory: Trajectory, calendar: DaylightCalendar, weather: ReplayWeather):
        self.trajectory = trajectory
        self.calendar = calendar
        self.weather = weather
        self.name = trajectory.variant
        self._thetas = trajectory.thetas()

    def predict(self, js, k: int, q: int) -> np.ndarray:
        js = np.asarray(js, dtype=int)
        if js.size == 0:
            return np.zeros(0)
        N, T = self.weather.forecast(js, k)
        phi = model.regressor(self.calendar.irradiance[js], T, N)
        return phi @ self._thetas[q + 1]


def predict_power(j, k: int, q: int, calendar: DaylightCalendar, weather: ReplayWeather, theta):
    """Clamped prediction for targets ``j`` with parameter image ``theta``."""
    N, T = weather.forecast(j, k)
    phi = model.regressor(calendar.irradiance[np.asarray(j)], T, N)
    return np.maximum(phi @ np.asarray(theta, dtype=float), 0.0)


class OdnpPredictor:
    """Yesterday's measurement at the same local time of day.

    Args:
        calendar: daylight calendar of the forecast targets.
        times: timestamps of the full measured series (day and night).
        power: the measured power series.
    """

    name = "ODNP"

    def __init__(self, calendar: DaylightCalendar, times, power):
        self.calendar = calendar
        history = pd.Series(np.asarray(power, dtype=float), index=_local_naive(times, calendar.tz))
        history = history[~history.index.duplicated(keep="first")]
        keys = _local_naive(calendar.times, calendar.tz) - pd.Timedelta(days=1)
        self.values = history.reindex(keys).to_numpy()

    def predict(self, js, k=None, q=None) -> np.ndarray:
        return self.values[np.asarray(js, dtype=int)]


def odnp(j, calendar: DaylightCalendar, times, power):
    """One-day-ahead naive prediction for daylight indices ``j``; NaN if missing."""
    return OdnpPredictor(calendar, times, power).predict(j)


def _local_naive(times, tz) -> pd.DatetimeIndex:
    return pd.DatetimeIndex(times).tz_convert(tz).tz_localize(None)


def submission_index(calendar: DaylightCalendar, d: int, hour: int = DA_SUBMISSION_HOUR) -> int:
    """First daylight index of day ``d`` at or after ``hour`` local time."""
    idx = calendar.indices(d)
    if idx.size == 0:
        raise ValueError(f"day {d} has no daylight samples")
    local = calendar.local_times[idx]
    after = idx[(local.hour + local.minute / 60.0) >= hour]
    return int(after[0]) if after.size else int(idx[-1])


def day_ahead(d: int, calendar: DaylightCalendar, predictor) -> ForecastSeries:
    """Forecast of day ``d + 1`` submitted on day ``d`` at 6 am.

    Uses the estimate available at the end of day ``d - 1``.
    """
    for day in (d - 1, d, d + 1):
        if not calendar.has_day(day):
            raise ValueError(f"day-ahead forecast for day {d} needs daylight data on day {day}")
    k = submission_index(calendar, d)
    q = calendar.last(d - 1)
    js = calendar.indices(d + 1)
    raw = np.asarray(predictor.predict(js, k, q), dtype=float)
    return ForecastSeries("DA", k, q, js, np.maximum(raw, 0.0), raw, day=d, model=predictor.name)


def ha_window(calendar: DaylightCalendar, k: int) -> np.ndarray:
    """Daylight indices covered by an hour-ahead forecast computed at ``k``.

    The operating hour starts at the first full local hour at least 105
    minutes after ``k``; the window spans 7 hours from there, truncated at
    the end of the day's light.
    """
    local = calendar.local_times
    start = (local[k] + HA_LEAD).ceil("h")
    stop = start + HA_HORIZON
    idx = calendar.indices(calendar.day[k])
    t = local[idx]
    return idx[(t >= start) & (t < stop)]


def hour_ahead(k: int, calendar: DaylightCalendar, predictor) -> ForecastSeries:
    """Hour-ahead forecast computed at ``k`` with the estimate after ``k``."""
    js = ha_window(calendar, k)
    raw = np.asarray(predictor.predict(js, k, k), dtype=float)
    return ForecastSeries("HA", k, k, js, np.maximum(raw, 0.0), raw, day=int(calendar.day[k]), model=predictor.name)


def series_frame(series: list[ForecastSeries], calendar: DaylightCalendar, measured) -> pd.DataFrame:
    """Long-format export of forecast series.

    Columns: model, kind, day (DA submission day or HA issue day), k, j,
    target_day, timestamp, forecast, raw, measured, q.
    """
    measured = np.asarray(measured, dtype=float)
    parts = []
    for s in series:
        parts.append(pd.DataFrame({
            "model": s.model,
            "kind": s.kind,
            "day": s.day,
            "k": s.issue,
            "j": s.j,
            "target_day": calendar.day[s.j],
            "timestamp": calendar.times[s.j],
            "forecast": s.power,
            "raw": s.raw,
            "measured": measured[s.j],
            "q": s.q,
        }))
    if not parts:
        return pd.DataFrame(columns=["model", "kind", "day", "k", "j", "target_day", "timestamp",
                                     "forecast", "raw", "measured", "q"])
    return pd.concat(parts, ignore_index=True)
