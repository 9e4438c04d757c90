"""Online parameter estimation: EKF for N5/N6, RLS for the linear model.

One update is performed per daylight sample. States are small dataclasses
that the step functions return as new objects, so a state can be handed
between workers between steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import model

log = logging.getLogger(__name__)


class EstimationFault(ArithmeticError):
    """Raised when a filter update cannot be carried out safely."""


@dataclass
class InitConfig:
    """Initialization of the estimators.

    Defaults follow the real-plant setup: climate priors for Italy,
    ``l0 = 10`` and ``r = 1e4`` kW^2. Simulation studies use ``l0 = 0.01``.
    ``mu0`` overrides the guideline initial guess entirely.
    """

    p_nom: float = 920.0
    mu4: float = 0.784
    mu5: float = -1.344
    l0: float = 10.0
    r: float = 1e4
    forgetting: float = 1.0
    mu0: tuple | None = None

    def __post_init__(self):
        if self.p_nom <= 0 or self.l0 <= 0 or self.r <= 0:
            raise ValueError("p_nom, l0 and r must be positive")
        if not 0.0 < self.forgetting <= 1.0:
            raise ValueError("forgetting factor must be in (0, 1]")


def guideline_params(cfg: InitConfig) -> np.ndarray:
    """Initial N5 guess from nominal power, typical ranges and climate priors."""
    if cfg.mu0 is not None:
        return np.asarray(cfg.mu0, dtype=float)[:5].copy()
    mu1 = cfg.p_nom / 1000.0
    eta2 = 0.5 * sum(model.ETA2_RANGE)
    eta3 = 0.5 * sum(model.ETA3_RANGE)
    return np.array([mu1, eta2 * mu1, eta3 * mu1, cfg.mu4, cfg.mu5])


@dataclass
class EkfState:
    mu: np.ndarray
    cov: np.ndarray
    r: float
    variant: str = "N5"

    @property
    def theta(self) -> np.ndarray:
        return model.theta(self.mu, self.variant)


@dataclass
class RlsState:
    theta: np.ndarray
    weight: np.ndarray
    forgetting: float = 1.0


def init_n5(cfg: InitConfig) -> EkfState:
    return EkfState(guideline_params(cfg), cfg.l0 * np.eye(5), cfg.r, "N5")


def init_n6(cfg: InitConfig) -> EkfState:
    mu = guideline_params(cfg)
    mu = np.r_[mu, mu[1] * mu[3]]
    return EkfState(mu, cfg.l0 * np.eye(6), cfg.r, "N6")


def init_l(cfg: InitConfig) -> RlsState:
    return RlsState(model.theta_n5(guideline_params(cfg)), cfg.l0 * np.eye(model.N_THETA), cfg.forgetting)


def init_state(variant: str, cfg: InitConfig):
    return {"N5": init_n5, "N6": init_n6, "L": init_l}[variant](cfg)


def _symmetrize(a):
    return 0.5 * (a + a.T)


def ekf_step(state: EkfState, phi, power: float) -> EkfState:
    """Measurement update of the static-parameter EKF.

    The state transition is the identity, so there is no prediction step.
    ``state.variant == "L"`` gives the plain Kalman filter on ``theta``.
    """
    phi = np.asarray(phi, dtype=float)
    H = phi @ model.jacobian_theta(state.mu, state.variant)
    RH = state.cov @ H
    s = float(H @ RH) + state.r
    if not s > 0.0 or not np.isfinite(s):
        raise EstimationFault(f"innovation variance is not positive ({s})")
    gain = RH / s
    innovation = float(power) - float(phi @ model.theta(state.mu, state.variant))
    cov = _symmetrize(state.cov - np.outer(gain, RH))
    return EkfState(state.mu + gain * innovation, cov, state.r, state.variant)


def rls_step(state: RlsState, phi, power: float) -> RlsState:
    """Recursive least squares update (unit forgetting by default)."""
    phi = np.asarray(phi, dtype=float)
    lam = state.forgetting
    Vphi = state.weight @ phi
    denom = lam + float(phi @ Vphi)
    weight = _symmetrize((state.weight - np.outer(Vphi, Vphi) / denom) / lam)
    innovation = float(power) - float(phi @ state.theta)
    return RlsState(state.theta + (weight @ phi) * innovation, weight, lam)


@dataclass
class Trajectory:
    """Estimates after each processed sample.

    ``estimates[0]`` is the initial guess and ``estimates[k + 1]`` the
    estimate after processing daylight sample ``k``. Skipped samples repeat
    the previous estimate and have a NaN innovation.
    """

    variant: str
    estimates: np.ndarray
    innovations: np.ndarray
    skipped: np.ndarray
    final_state: object = field(repr=False, default=None)

    def params_after(self, k: int) -> np.ndarray:
        return self.estimates[k + 1]

    def theta_after(self, k: int) -> np.ndarray:
        return model.theta(self.estimates[k + 1], self.variant)

    def thetas(self) -> np.ndarray:
        """11-entry image of every row of ``estimates``."""
        if self.variant == "L":
            return self.estimates
        return np.array([model.theta(m, self.variant) for m in self.estimates])

    def __len__(self):
        return len(self.innovations)


def run_estimation(phi, power, variant: str, cfg: InitConfig | None = None, state=None, times=None) -> Trajectory:
    """Feed daylight samples to the estimator of ``variant`` in order.

    Args:
        phi: regressors, shape ``(K, 11)``.
        power: measured power, shape ``(K,)``.
        variant: ``"N5"``, ``"N6"`` (EKF) or ``"L"`` (RLS).
        cfg: initialization, ignored when ``state`` is given.
        state: start from an existing estimator state instead.
        times: optional timestamps, only checked for monotonicity.

    Samples with a non-finite regressor or power are skipped and logged.
    """
    phi = np.asarray(phi, dtype=float).reshape(-1, model.N_THETA)
    power = np.asarray(power, dtype=float)
    if len(phi) != len(power):
        raise ValueError("phi and power lengths differ")
    if times is not None:
        t = np.asarray(times, dtype="datetime64[ns]") if not hasattr(times, "asi8") else times.asi8
        if np.any(np.diff(np.asarray(t).astype(np.int64)) <= 0):
            raise ValueError("timestamps must be strictly increasing")
    if state is None:
        state = init_state(variant, cfg or InitConfig())
    step = rls_step if isinstance(state, RlsState) else ekf_step
    current = state.theta if isinstance(state, RlsState) else state.mu

    K = len(power)
    est = np.empty((K + 1, current.size))
    est[0] = current
    innov = np.full(K, np.nan)
    skipped = ~(np.isfinite(power) & np.all(np.isfinite(phi), axis=1))
    if skipped.any():
        log.warning("skipping %d samples with missing or invalid data", int(skipped.sum()))
    for k in range(K):
        if not skipped[k]:
            prev = est[k]
            innov[k] = power[k] - phi[k] @ model.theta(prev, variant)
            state = step(state, phi[k], power[k])
        est[k + 1] = state.theta if isinstance(state, RlsState) else state.mu
    return Trajectory(variant, est, innov, skipped, state)


def trajectory_frame(traj: Trajectory, calendar=None):
    """Tabular export: k, day, time of day, estimate entries, innovation."""
    import pandas as pd

    names = [f"theta{i + 1}" for i in range(model.N_THETA)] if traj.variant == "L" else [
        f"mu{i + 1}" for i in range(traj.estimates.shape[1])
    ]
    df = pd.DataFrame(traj.estimates[1:], columns=names)
    df.insert(0, "k", np.arange(len(traj)))
    if calendar is not None:
        df.insert(1, "day", calendar.day)
        df.insert(2, "tod", calendar.local_times.strftime("%H:%M"))
    df["innovation"] = traj.innovations
    return df
