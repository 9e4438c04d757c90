"""Synthetic validation data: seasonal weather, true plant power, noise setups.

A nominal year is generated at 15-minute resolution; each setup (SID 0-12)
then adds Gaussian noise to some channels, quantizes cloud cover to tenths
and averages to hourly samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .solar import GeoLocation, SurfaceOrientation, reference_clear_sky


@dataclass(frozen=True)
class TrueSystem:
    mu1: float = 0.92
    mu2: float = -1.237e-4
    mu3: float = -2.99e-3
    mu4: float = -0.3
    mu5: float = -0.25
    tilt: float = 27.0
    azimuth: float = 0.0
    p_nom: float = 920.0
    latitude: float = 39.2
    longitude: float = 9.1
    tz: str = "Europe/Rome"

    @property
    def params(self) -> np.ndarray:
        return np.array([self.mu1, self.mu2, self.mu3, self.mu4, self.mu5])

    @property
    def location(self) -> GeoLocation:
        return GeoLocation(self.latitude, self.longitude)

    @property
    def orientation(self) -> SurfaceOrientation:
        return SurfaceOrientation(self.tilt, self.azimuth)


@dataclass(frozen=True)
class ScenarioConfig:
    """Noise levels are given as three standard deviations."""

    sid: int
    sigma3_n: float = 0.0
    sigma3_p: float = 0.0
    sigma3_t: float = 0.0
    quantize_n: bool = True
    hourly_average: bool = True


SCENARIOS = {
    0: ScenarioConfig(0, quantize_n=False, hourly_average=False),
    1: ScenarioConfig(1, quantize_n=False),
    2: ScenarioConfig(2, sigma3_n=0.0),
    3: ScenarioConfig(3, sigma3_n=0.1),
    4: ScenarioConfig(4, sigma3_n=0.5),
    5: ScenarioConfig(5, sigma3_n=1.0),
    6: ScenarioConfig(6, sigma3_p=10.0),
    7: ScenarioConfig(7, sigma3_p=50.0),
    8: ScenarioConfig(8, sigma3_p=100.0),
    9: ScenarioConfig(9, sigma3_t=1.0),
    10: ScenarioConfig(10, sigma3_t=3.0),
    11: ScenarioConfig(11, sigma3_t=5.0),
    12: ScenarioConfig(12, sigma3_n=0.3, sigma3_p=50.0, sigma3_t=3.0),
}


def scenario(sid: int) -> ScenarioConfig:
    try:
        return SCENARIOS[int(sid)]
    except (KeyError, ValueError):
        raise ValueError(f"unknown setup id {sid!r}; expected 0..12") from None


@dataclass
class SyntheticDataset:
    """Sampled plant data: power (kW), air temperature (degC), cloud cover."""

    times: pd.DatetimeIndex
    power: np.ndarray
    temp: np.ndarray
    cloud: np.ndarray
    tau_s: float
    seed: int | None = None
    sid: int | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"power_kw": self.power, "temp_c": self.temp, "cloud": self.cloud},
            index=self.times.rename("timestamp"),
        )


@dataclass(frozen=True)
class WeatherParams:
    """Knobs of the synthetic weather generator (central/southern Italy)."""

    cloud_mean: float = 0.45
    cloud_seasonal: float = 0.15  # winter minus mean cloudiness
    cloud_concentration: float = 2.0  # Beta a + b of the daily level
    episode_persistence: float = 0.6  # chance a day keeps yesterday's level
    ou_rate: float = 1.0 / 3.0  # per hour
    ou_sigma: float = 0.25  # stationary std of the intraday deviation
    temp_mean: float = 16.0
    temp_seasonal: float = 8.5
    temp_diurnal: float = 4.5
    temp_anomaly_sigma: float = 1.5
    temp_noise_sigma: float = 0.3


def year_index(year: int = 2015, tau_s: float = 15.0, tz: str = "Europe/Rome") -> pd.DatetimeIndex:
    """UTC grid covering local days 1 January .. 31 December of ``year``."""
    start = pd.Timestamp(year=year, month=1, day=1).tz_localize(tz).tz_convert("UTC")
    end = pd.Timestamp(year=year + 1, month=1, day=1).tz_localize(tz).tz_convert("UTC")
    return pd.date_range(start, end, freq=f"{int(tau_s)}min", inclusive="left")


def generate_weather(times, seed: int, tz: str = "Europe/Rome", params: WeatherParams = WeatherParams()):
    """Nominal cloud cover ``N`` and temperature ``T`` on the given grid.

    Cloud cover follows a daily level drawn from a seasonally modulated
    Beta distribution, kept for several days with some probability to form
    cloudy and clear episodes, plus an Ornstein-Uhlenbeck intraday
    deviation; the result is clipped to [0, 1]. Temperature is an annual
    sinusoid (coldest mid January) plus a diurnal cycle damped by clouds, a
    slowly varying daily anomaly and small noise, clipped to [-10, 40].
    """
    rng = np.random.default_rng(seed)
    idx = pd.DatetimeIndex(times)
    local = idx.tz_convert(tz)
    dates = local.normalize().tz_localize(None)
    day_codes, day_pos = np.unique(dates.to_numpy(), return_inverse=True)
    doy = pd.DatetimeIndex(day_codes).dayofyear.to_numpy()
    n_days = len(day_codes)
    p = params

    season = np.cos(2 * np.pi * (doy - 15) / 365.0)
    mean = np.clip(p.cloud_mean + p.cloud_seasonal * season, 0.05, 0.95)
    level = np.empty(n_days)
    for d in range(n_days):
        if d and rng.random() < p.episode_persistence:
            level[d] = level[d - 1]
        else:
            level[d] = rng.beta(p.cloud_concentration * mean[d], p.cloud_concentration * (1 - mean[d]))

    dt_hours = np.r_[np.diff(idx.asi8) / 3.6e12, 0.25] if len(idx) > 1 else np.array([0.25])
    dev = np.empty(len(idx))
    x = rng.normal(0.0, p.ou_sigma)
    for i in range(len(idx)):
        dev[i] = x
        a = np.exp(-p.ou_rate * dt_hours[i])
        x = a * x + p.ou_sigma * np.sqrt(1 - a * a) * rng.normal()
    cloud = np.clip(level[day_pos] + dev, 0.0, 1.0)

    anomaly = np.empty(n_days)
    a = 0.0
    for d in range(n_days):
        a = 0.7 * a + p.temp_anomaly_sigma * np.sqrt(1 - 0.49) * rng.normal()
        anomaly[d] = a
    seasonal = p.temp_mean - p.temp_seasonal * np.cos(2 * np.pi * (local.dayofyear.to_numpy() - 15) / 365.0)
    hour = (local.hour + local.minute / 60.0).to_numpy()
    diurnal = p.temp_diurnal * (1.0 - 0.6 * cloud) * np.cos(2 * np.pi * (hour - 15.0) / 24.0)
    temp = seasonal + diurnal + anomaly[day_pos] + rng.normal(0.0, p.temp_noise_sigma, len(idx))
    return cloud, np.clip(temp, -10.0, 40.0)


def true_power(N, T, I0, system: TrueSystem = TrueSystem()):
    """Plant power written out directly from irradiance and PVUSA formulas."""
    irr = (1.0 + system.mu4 * np.asarray(N) + system.mu5 * np.asarray(N) ** 2) * np.asarray(I0)
    return (system.mu1 + system.mu2 * irr + system.mu3 * np.asarray(T)) * irr


def nominal_dataset(system: TrueSystem = TrueSystem(), seed: int = 0, year: int = 2015,
                    weather: WeatherParams = WeatherParams()) -> SyntheticDataset:
    """Noise-free 15-minute year for ``system``."""
    times = year_index(year, 15.0, system.tz)
    cloud, temp = generate_weather(times, seed, system.tz, weather)
    I0 = reference_clear_sky(system.location, system.orientation, times)
    power = true_power(cloud, temp, I0, system)
    return SyntheticDataset(times, power, temp, cloud, 15.0, seed, None, {"year": year})


def quantize(N, step: float = 0.1):
    """Round to the nearest multiple of ``step`` (half away from zero)."""
    N = np.asarray(N, dtype=float)
    # round the ratio first so decimal ties such as 0.15 / 0.1 are not lost
    q = np.sign(N) * np.floor(np.round(np.abs(N) / step, 9) + 0.5) * step
    return np.round(q, 10)


def hourly_average(times: pd.DatetimeIndex, *channels):
    """Average each channel over UTC clock hours; label = hour start."""
    hours = times.floor("h")
    groups = pd.DataFrame({f"c{i}": c for i, c in enumerate(channels)}, index=hours).groupby(level=0).mean()
    return (groups.index,) + tuple(groups[f"c{i}"].to_numpy() for i in range(len(channels)))


def apply_scenario(dataset: SyntheticDataset, cfg: ScenarioConfig, seed: int | None = None) -> SyntheticDataset:
    """Noise, clamp, quantize and average a nominal 15-minute dataset.

    Order: Gaussian noise on the designated channels, clamp N to [0, 1],
    quantize N to tenths, hourly averaging of every channel. Power is not
    clamped, so noisy dawn/dusk samples may be negative.
    """
    rng = np.random.default_rng(seed)
    power = dataset.power.copy()
    temp = dataset.temp.copy()
    cloud = dataset.cloud.copy()
    # draw all three streams so that a channel's noise does not depend on the others' levels
    e_n, e_p, e_t = rng.standard_normal((3, len(dataset)))
    if cfg.sigma3_n:
        cloud = cloud + cfg.sigma3_n / 3.0 * e_n
    if cfg.sigma3_p:
        power = power + cfg.sigma3_p / 3.0 * e_p
    if cfg.sigma3_t:
        temp = temp + cfg.sigma3_t / 3.0 * e_t
    if cfg.sigma3_n or cfg.quantize_n:
        cloud = np.clip(cloud, 0.0, 1.0)
    if cfg.quantize_n:
        cloud = quantize(cloud)
    times, tau = dataset.times, dataset.tau_s
    if cfg.hourly_average:
        times, power, temp, cloud = hourly_average(times, power, temp, cloud)
        tau = 60.0
    meta = dict(dataset.meta, scenario=cfg.__dict__.copy(), noise_seed=seed)
    return replace(dataset, times=times, power=power, temp=temp, cloud=cloud, tau_s=tau, sid=cfg.sid, meta=meta)


def cloud_noise_std(nominal_cloud, sigma3_n: float, seed: int | None = None) -> float:
    """Standard deviation of the noisy, quantized cloud cover series.

    Measured on the unclamped series, i.e. ``std(quantize(N + e))``; with a
    roughly uniform nominal ``N`` this grows as ``sqrt(1/12 + sigma_N^2)``.
    """
    rng = np.random.default_rng(seed)
    noisy = np.asarray(nominal_cloud) + sigma3_n / 3.0 * rng.standard_normal(np.size(nominal_cloud))
    return float(np.std(quantize(noisy)))


def simulate(sid: int, seed: int = 0, system: TrueSystem = TrueSystem(), year: int = 2015,
             weather: WeatherParams = WeatherParams()) -> SyntheticDataset:
    """Nominal year for ``seed`` processed with setup ``sid``.

    The weather and the noise use independent streams derived from ``seed``.
    """
    cfg = scenario(sid)
    weather_seed, noise_seed = np.random.SeedSequence(seed).generate_state(2)
    nominal = nominal_dataset(system, int(weather_seed), year, weather)
    out = apply_scenario(nominal, cfg, int(noise_seed))
    out.seed = seed
    out.meta.update(weather_seed=int(weather_seed), noise_seed=int(noise_seed), weather=weather.__dict__.copy())
    return out


def run_monte_carlo(sid: int, runs: int = 10, cfg=None, base_seed: int = 0, workers: int = 1):
    """Average performance indices of ``runs`` independently seeded simulations.

    See :func:`cloudpv.experiment.run_monte_carlo`.
    """
    from .experiment import run_monte_carlo as _run

    return _run(sid, runs, cfg, base_seed, workers)
