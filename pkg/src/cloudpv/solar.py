"""Solar position, clear-sky irradiance and the daylight index calendar.

Angles handed to the public functions are in degrees for locations and
surface orientations and in radians for solar positions. Azimuths (solar
and surface) are measured from south, positive towards west.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import pandas as pd

#: apparent extraterrestrial irradiance, W/m^2
EXTRATERRESTRIAL = 1353.0


@dataclass(frozen=True)
class GeoLocation:
    latitude: float
    longitude: float

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude out of range: {self.latitude}")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude out of range: {self.longitude}")


@dataclass(frozen=True)
class SurfaceOrientation:
    """Panel tilt (0 = horizontal) and azimuth (0 = south), degrees."""

    tilt: float
    azimuth: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.tilt <= 90.0:
            raise ValueError(f"tilt out of range: {self.tilt}")
        if not -180.0 <= self.azimuth <= 180.0:
            raise ValueError(f"azimuth out of range: {self.azimuth}")

    @classmethod
    def guideline(cls, latitude: float) -> "SurfaceOrientation":
        """Default orientation assumed when the real one is unknown.

        South facing, tilted by latitude minus 12 degrees, clamped to
        [10, 40] degrees.
        """
        return cls(tilt=float(np.clip(abs(latitude) - 12.0, 10.0, 40.0)), azimuth=0.0)


class SolarPosition(NamedTuple):
    altitude: np.ndarray
    azimuth: np.ndarray


def _utc_index(times) -> pd.DatetimeIndex:
    idx = pd.DatetimeIndex(np.atleast_1d(times) if not isinstance(times, pd.DatetimeIndex) else times)
    if idx.tz is None:
        raise ValueError("timestamps must carry a UTC offset or time zone")
    if idx.hasnans:
        raise ValueError("invalid (NaT) timestamp")
    return idx.tz_convert("UTC")


def solar_position(loc: GeoLocation, times) -> SolarPosition:
    """Solar altitude and azimuth (radians) for tz-aware timestamps.

    Uses the NOAA fractional-year series for declination and equation of
    time, which is good to a few tenths of a degree. No refraction
    correction is applied.
    """
    idx = _utc_index(times)
    doy = idx.dayofyear.to_numpy()
    hours = (idx.hour + idx.minute / 60.0 + idx.second / 3600.0).to_numpy()
    year_len = np.where(idx.is_leap_year, 366.0, 365.0)
    g = 2.0 * np.pi / year_len * (doy - 1 + (hours - 12.0) / 24.0)

    eqtime = 229.18 * (
        0.000075
        + 0.001868 * np.cos(g)
        - 0.032077 * np.sin(g)
        - 0.014615 * np.cos(2 * g)
        - 0.040849 * np.sin(2 * g)
    )
    decl = (
        0.006918
        - 0.399912 * np.cos(g)
        + 0.070257 * np.sin(g)
        - 0.006758 * np.cos(2 * g)
        + 0.000907 * np.sin(2 * g)
        - 0.002697 * np.cos(3 * g)
        + 0.00148 * np.sin(3 * g)
    )
    true_solar_minutes = hours * 60.0 + eqtime + 4.0 * loc.longitude
    hour_angle = np.radians(true_solar_minutes / 4.0 - 180.0)

    lat = np.radians(loc.latitude)
    sin_h = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(hour_angle)
    altitude = np.arcsin(np.clip(sin_h, -1.0, 1.0))
    azimuth = np.arctan2(
        np.sin(hour_angle),
        np.cos(hour_angle) * np.sin(lat) - np.tan(decl) * np.cos(lat),
    )
    if np.ndim(times) == 0 and not isinstance(times, pd.DatetimeIndex):
        return SolarPosition(float(altitude[0]), float(azimuth[0]))
    return SolarPosition(altitude, azimuth)


def clear_sky_normal(h):
    """Clear-sky beam irradiance normal to the sun rays, W/m^2.

    ``A * 0.7 ** (1/sin h) ** 0.678`` for ``0 < h <= pi/2``, zero otherwise.
    """
    h = np.asarray(h, dtype=float)
    up = (h > 0.0) & (h <= np.pi / 2)
    s = np.where(up, np.sin(np.where(up, h, 1.0)), 1.0)
    out = np.where(up, EXTRATERRESTRIAL * 0.7 ** ((1.0 / s) ** 0.678), 0.0)
    return out if out.ndim else float(out)


def clear_sky_inclined(pos: SolarPosition, orient: SurfaceOrientation, icsn):
    """Project normal clear-sky irradiance onto a tilted surface.

    Negative values (sun behind the panel plane) are floored at zero.
    """
    h = np.asarray(pos.altitude, dtype=float)
    gamma = np.asarray(pos.azimuth, dtype=float)
    psi = np.radians(orient.tilt)
    zeta = np.radians(orient.azimuth)
    if orient.tilt == 0.0:
        factor = np.sin(h)
    else:
        factor = np.sin(psi) * np.cos(h) * np.cos(zeta - gamma) + np.cos(psi) * np.sin(h)
    out = np.maximum(factor * np.asarray(icsn, dtype=float), 0.0)
    return out if out.ndim else float(out)


def reference_clear_sky(loc: GeoLocation, orient: SurfaceOrientation, times):
    """Theoretical clear-sky irradiance I0 on the assumed panel plane."""
    pos = solar_position(loc, times)
    return clear_sky_inclined(pos, orient, clear_sky_normal(pos.altitude))


def interval_clear_sky(
    loc: GeoLocation,
    orient: SurfaceOrientation,
    times,
    tau_s: float,
    substep: float = 15.0,
) -> np.ndarray:
    """Mean I0 over each sampling interval ``[t, t + tau_s)``.

    The interval is sampled every ``substep`` minutes starting at ``t``, so
    with ``tau_s == substep`` this is the instantaneous value at ``t``. This
    matches data produced by averaging 15-minute samples into hourly ones.
    """
    idx = _utc_index(times)
    n_sub = max(1, int(round(tau_s / substep)))
    acc = np.zeros(len(idx))
    for i in range(n_sub):
        acc += reference_clear_sky(loc, orient, idx + pd.Timedelta(minutes=i * substep))
    return acc / n_sub


@dataclass
class DaylightCalendar:
    """Daylight samples renumbered as consecutive indices ``k = 0..K-1``.

    Attributes:
        times: UTC timestamps of the daylight samples.
        irradiance: I0 of each daylight sample (strictly positive).
        source_index: position of each daylight sample in the full series.
        day: local calendar day number of each sample (1 = 1 January of the
            first year in the series).
        days: ordered day numbers present in the series, including days with
            no daylight sample.
        empty_days: day numbers without any daylight sample (polar night).
        tz: time zone used for civil time.
        tau_s: sampling time, minutes.
    """

    times: pd.DatetimeIndex
    irradiance: np.ndarray
    source_index: np.ndarray
    day: np.ndarray
    days: np.ndarray
    empty_days: np.ndarray
    tz: str
    tau_s: float
    _bounds: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.day):
            edges = np.flatnonzero(np.diff(self.day)) + 1
            starts = np.r_[0, edges]
            stops = np.r_[edges, len(self.day)]
            self._bounds = {int(self.day[a]): (int(a), int(b)) for a, b in zip(starts, stops)}

    @classmethod
    def from_series(cls, times, irradiance, tz: str = "UTC", tau_s: float | None = None):
        """Build the calendar from a full (day and night) sampled series."""
        idx = _utc_index(times)
        if len(idx) == 0:
            raise ValueError("empty time range")
        irradiance = np.asarray(irradiance, dtype=float)
        if tau_s is None:
            tau_s = float(np.median(np.diff(idx.asi8)) / 6e10) if len(idx) > 1 else 60.0
        local = idx.tz_convert(tz)
        first = pd.Timestamp(year=local[0].year, month=1, day=1)
        daynum = (local.normalize().tz_localize(None) - first).days.to_numpy() + 1
        mask = irradiance > 0.0
        all_days = np.unique(daynum)
        lit_days = np.unique(daynum[mask])
        return cls(
            times=idx[mask],
            irradiance=irradiance[mask],
            source_index=np.flatnonzero(mask),
            day=daynum[mask],
            days=all_days,
            empty_days=np.setdiff1d(all_days, lit_days),
            tz=tz,
            tau_s=tau_s,
        )

    def __len__(self):
        return len(self.times)

    @property
    def local_times(self) -> pd.DatetimeIndex:
        return self.times.tz_convert(self.tz)

    @property
    def lit_days(self) -> list[int]:
        return list(self._bounds)

    def indices(self, d: int) -> np.ndarray:
        """Daylight index set of day ``d`` (empty for days without light)."""
        a, b = self._bounds.get(int(d), (0, 0))
        return np.arange(a, b)

    def first(self, d: int) -> int:
        return self._bounds[int(d)][0]

    def last(self, d: int) -> int:
        return self._bounds[int(d)][1] - 1

    def has_day(self, d: int) -> bool:
        return int(d) in self._bounds


def daylight_calendar(
    loc: GeoLocation,
    orient: SurfaceOrientation,
    start,
    end,
    tau_s: float,
    tz: str = "UTC",
) -> DaylightCalendar:
    """Daylight calendar for the local days ``start`` .. ``end`` inclusive."""
    if (24 * 60) % tau_s:
        raise ValueError("sampling time must divide 24 h")
    first = pd.Timestamp(start).tz_localize(tz) if pd.Timestamp(start).tz is None else pd.Timestamp(start)
    last = pd.Timestamp(end).tz_localize(tz) if pd.Timestamp(end).tz is None else pd.Timestamp(end)
    last = last.normalize() + pd.Timedelta(days=1)
    if last <= first:
        raise ValueError("empty day range")
    times = pd.date_range(first.tz_convert("UTC"), last.tz_convert("UTC"), freq=f"{int(tau_s)}min", inclusive="left")
    irr = interval_clear_sky(loc, orient, times, tau_s)
    return DaylightCalendar.from_series(times, irr, tz=tz, tau_s=tau_s)
