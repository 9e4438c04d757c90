import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloudpv import metrics
from cloudpv.metrics import MetricError, all_metrics


def naive_metrics(measured, predicted, p_nom):
    """Direct loop summation over the positive pairs."""
    pairs = [(m, p) for m, p in zip(measured, predicted) if m > 0 and p > 0]
    K = len(pairs)
    sse = sum((m - p) ** 2 for m, p in pairs)
    mean_m = sum(m for m, _ in pairs) / K
    sst = sum((m - mean_m) ** 2 for m, _ in pairs)
    return {
        "RMSE": math.sqrt(sse / K),
        "MAPE": 100 * sum(abs(m - p) / m for m, p in pairs) / K,
        "MBE": sum(m - p for m, p in pairs) / K,
        "R2": 1 - sse / sst,
        "NRMSE": math.sqrt(sse / sst),
        "RMSE_NP": math.sqrt(sse / K) / p_nom,
        "MAPE_NP": 100 * sum(abs(m - p) for m, p in pairs) / K / p_nom,
    }


def test_hand_example():
    out = all_metrics([100.0, 200.0], [90.0, 220.0], p_nom=920.0)
    assert out["RMSE"] == pytest.approx(15.8113883, rel=1e-9)
    assert out["MBE"] == pytest.approx(-5.0)
    assert out["MAPE"] == pytest.approx(10.0)
    assert out["RMSE_NP"] == pytest.approx(0.01718629, rel=1e-6)
    assert out["MAPE_NP"] == pytest.approx(1.63043478, rel=1e-8)
    # SSE = 500, SST = 5000
    assert out["R2"] == pytest.approx(0.9)
    assert out["NRMSE"] == pytest.approx(math.sqrt(0.1))
    assert out["K"] == 2


@pytest.mark.parametrize("seed", range(20))
def test_matches_direct_summation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 400))
    m = rng.uniform(-50, 900, n)
    p = m + rng.normal(0, 80, n)
    m[rng.random(n) < 0.05] = np.nan
    ours = all_metrics(m, p, p_nom=920.0)
    finite = np.isfinite(m)
    ref = naive_metrics(m[finite].tolist(), p[finite].tolist(), 920.0)
    for name, value in ref.items():
        assert ours[name] == pytest.approx(value, rel=1e-12, abs=1e-300), name


def test_positive_pair_filter():
    m = [0.0, 100.0, -3.0, 200.0, 50.0]
    p = [10.0, 90.0, 5.0, 220.0, 0.0]
    assert metrics.rmse(m, p) == pytest.approx(15.8113883, rel=1e-9)
    assert all_metrics(m, p)["K"] == 2


def test_undefined_measures():
    with pytest.raises(MetricError):
        metrics.rmse([0.0], [1.0])
    with pytest.raises(MetricError):
        metrics.r2([5.0], [4.0])
    with pytest.raises(MetricError):
        metrics.nrmse([5.0, 5.0], [4.0, 6.0])
    out = all_metrics([5.0, 5.0], [4.0, 6.0])
    assert math.isnan(out["R2"]) and out["RMSE"] == 1.0


def test_r2_can_be_negative():
    assert metrics.r2([1.0, 2.0, 3.0], [3.0, 1.0, 2.0]) < 0
    assert metrics.nrmse([1.0, 2.0, 3.0], [3.0, 1.0, 2.0]) > 1


positive = st.floats(1.0, 1e4, allow_nan=False)


@settings(max_examples=150)
@given(st.lists(st.tuples(positive, positive), min_size=2, max_size=40), st.floats(0.1, 10))
def test_invariants(pairs, c):
    m, p = map(np.array, zip(*pairs))
    assert metrics.rmse(m, m) == 0.0
    assert metrics.rmse(m, p) >= abs(metrics.mbe(m, p)) - 1e-9 * metrics.rmse(m, p)
    assert metrics.rmse(c * m, c * p) == pytest.approx(c * metrics.rmse(m, p), rel=1e-9, abs=1e-9)
    assert metrics.mape(c * m, c * p) == pytest.approx(metrics.mape(m, p), rel=1e-9, abs=1e-9)
    assert metrics.mbe(m, p) == pytest.approx(-metrics.mbe(p, m), rel=1e-9, abs=1e-9)
    assert metrics.rmse_np(m, p, 500.0) == pytest.approx(metrics.rmse(m, p) / 500.0)
    if np.ptp(m) > 1e-6 * m.mean():
        r2, nr = metrics.r2(m, p), metrics.nrmse(m, p)
        assert r2 <= 1.0
        assert nr == pytest.approx(math.sqrt(1 - r2), rel=1e-6, abs=1e-9)


def test_rmse_daily():
    rd = metrics.rmse_daily([3, 3, 4, 5], [100.0, 200.0, 50.0, 0.0], [90.0, 220.0, 50.0, 10.0])
    assert list(rd.index) == [3, 4]
    assert rd[3] == pytest.approx(15.8113883, rel=1e-9)
    assert rd[4] == 0.0


def test_power_std():
    assert metrics.power_std([0.0, 2.0]) == pytest.approx(math.sqrt(2))
    assert metrics.power_std([1.0, np.nan, 3.0]) == pytest.approx(math.sqrt(2))
    with pytest.raises(MetricError):
        metrics.power_std([1.0])
