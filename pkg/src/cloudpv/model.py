"""PVUSA plant model combined with a quadratic cloud cover factor.

Units: irradiance in W/m^2, temperature in degC, power in kW. Parameter
vectors are plain numpy arrays ordered ``mu1 .. mu5`` (N5) or
``mu1 .. mu6`` (N6); the regression image ``theta`` has 11 entries ordered
like the monomials returned by :func:`regressor`.
"""

from __future__ import annotations

import numpy as np

VARIANTS = ("N5", "N6", "L")
N_THETA = 11

#: typical range of mu2/mu1 and mu3/mu1 across PV technologies
ETA2_RANGE = (-2.5e-4, -1.9e-5)
ETA3_RANGE = (-4.8e-3, -1.7e-3)

#: reference plant used for the synthetic experiments
TRUE_PARAMS = np.array([0.92, -1.237e-4, -2.99e-3, -0.3, -0.25])


def n_params(variant: str) -> int:
    return {"N5": 5, "N6": 6, "L": N_THETA}[_check(variant)]


def _check(variant):
    if variant not in VARIANTS:
        raise ValueError(f"unknown model variant {variant!r}; expected one of {VARIANTS}")
    return variant


def _check_cloud(N):
    N = np.asarray(N, dtype=float)
    if np.any((N < 0.0) | (N > 1.0)):
        raise ValueError("cloud cover fraction must lie in [0, 1]")
    return N


def ccf(N, mu4, mu5):
    """Cloud cover factor ``1 + mu4 N + mu5 N^2``. Not clamped."""
    N = _check_cloud(N)
    return 1.0 + mu4 * N + mu5 * N**2


def pvusa_power(I, T, mu1, mu2, mu3):
    return mu1 * I + mu2 * I**2 + mu3 * I * T


def effective_irradiance(I0, N, mu4, mu5):
    return ccf(N, mu4, mu5) * np.asarray(I0, dtype=float)


def combined_power(I0, T, N, params):
    """Plant power from clear-sky irradiance, temperature and cloud cover."""
    mu1, mu2, mu3, mu4, mu5 = np.asarray(params, dtype=float)[:5]
    return pvusa_power(effective_irradiance(I0, N, mu4, mu5), T, mu1, mu2, mu3)


def correction_terms(params) -> tuple[float, float]:
    """Return ``(eta2, eta3) = (mu2/mu1, mu3/mu1)``."""
    mu = np.asarray(params, dtype=float)
    return mu[1] / mu[0], mu[2] / mu[0]


def consistency(params) -> dict:
    """Physical plausibility report for an N5/N6 estimate.

    Checks ``eta2``/``eta3`` against their typical ranges and, for N6, how far
    ``mu6`` is from ``mu2 * mu4``.
    """
    mu = np.asarray(params, dtype=float)
    eta2, eta3 = correction_terms(mu)
    report = {
        "eta2": eta2,
        "eta3": eta3,
        "eta2_ok": ETA2_RANGE[0] <= eta2 <= ETA2_RANGE[1],
        "eta3_ok": ETA3_RANGE[0] <= eta3 <= ETA3_RANGE[1],
    }
    if mu.size == 6:
        report["mu6_gap"] = abs(mu[5] - mu[1] * mu[3])
    return report


def regressor(I0, T, N) -> np.ndarray:
    """Monomial regressor; broadcasts and stacks along the last axis."""
    I0 = np.asarray(I0, dtype=float)
    T = np.asarray(T, dtype=float)
    N = np.asarray(N, dtype=float)
    I2 = I0 * I0
    N2 = N * N
    return np.stack(
        np.broadcast_arrays(
            I0, I0 * N, I0 * N2,
            I2, I2 * N, I2 * N2, I2 * N2 * N, I2 * N2 * N2,
            T * I0, T * I0 * N, T * I0 * N2,
        ),
        axis=-1,
    )


def theta_n5(mu) -> np.ndarray:
    m1, m2, m3, m4, m5 = mu
    return np.array([
        m1, m1 * m4, m1 * m5,
        m2, 2 * m2 * m4, m2 * m4**2 + 2 * m2 * m5, 2 * m2 * m4 * m5, m2 * m5**2,
        m3, m3 * m4, m3 * m5,
    ])


def theta_n6(mu) -> np.ndarray:
    m1, m2, m3, m4, m5, m6 = mu
    return np.array([
        m1, m1 * m4, m1 * m5,
        m2, 2 * m6, m4 * m6 + 2 * m2 * m5, 2 * m5 * m6, m2 * m5**2,
        m3, m3 * m4, m3 * m5,
    ])


def theta(params, variant: str) -> np.ndarray:
    """Map a parameter vector of the given variant to the 11-entry image."""
    p = np.asarray(params, dtype=float)
    if _check(variant) == "N5":
        return theta_n5(p)
    if variant == "N6":
        return theta_n6(p)
    return p.copy()


def jacobian_theta(params, variant: str) -> np.ndarray:
    """Analytic ``d theta / d params``, shape ``(11, n_params(variant))``."""
    p = np.asarray(params, dtype=float)
    if _check(variant) == "L":
        return np.eye(N_THETA)
    m1, m2, m3, m4, m5 = p[:5]
    J = np.zeros((N_THETA, p.size))
    J[0, 0] = 1.0
    J[1, 0], J[1, 3] = m4, m1
    J[2, 0], J[2, 4] = m5, m1
    J[3, 1] = 1.0
    J[7, 1], J[7, 4] = m5**2, 2 * m2 * m5
    J[8, 2] = 1.0
    J[9, 2], J[9, 3] = m4, m3
    J[10, 2], J[10, 4] = m5, m3
    if variant == "N5":
        J[4, 1], J[4, 3] = 2 * m4, 2 * m2
        J[5, 1], J[5, 3], J[5, 4] = m4**2 + 2 * m5, 2 * m2 * m4, 2 * m2
        J[6, 1], J[6, 3], J[6, 4] = 2 * m4 * m5, 2 * m2 * m5, 2 * m2 * m4
    else:
        m6 = p[5]
        J[4, 5] = 2.0
        J[5, 1], J[5, 3], J[5, 4], J[5, 5] = 2 * m5, m6, 2 * m2, m4
        J[6, 4], J[6, 5] = 2 * m6, 2 * m5
    return J
