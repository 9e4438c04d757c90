import io

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloudpv.ingest import merge_hourly, quality_report

POWER = """timestamp,power_kw,temp_c
2015-06-01T08:00:00+02:00,100.0,20.0
2015-06-01T09:00:00+02:00,200.0,21.0
2015-06-01T10:00:00+02:00,300.0,22.0
2015-06-01T11:00:00+02:00,400.0,23.0
2015-06-01T11:00:00+02:00,420.0,25.0
2015-06-01T12:00:00+02:00,garbage,24.0
2015-06-01T13:00:00+02:00,-1.0,24.0
"""

CCI = """timestamp,cci
2015-06-01T08:10:00+02:00,0.2
2015-06-01T08:40:00+02:00,0.4
2015-06-01T10:30:00+02:00,0.5
2015-06-01T11:05:00+02:00,1.4
2015-06-01T11:20:00+02:00,0.1
2015-06-01T13:59:00+02:00,0.0
not-a-time,0.3
"""


def _merge(power=POWER, cci=CCI, okta=False):
    return merge_hourly(io.StringIO(power), io.StringIO(cci), okta=okta)


def test_exact_merge():
    ds, rep = _merge()
    hours = ds.times.tz_convert("Europe/Rome").hour
    assert list(hours) == [8, 10, 11, 13]
    np.testing.assert_allclose(ds.cloud, [0.3, 0.5, 0.1, 0.0])
    np.testing.assert_allclose(ds.power, [100.0, 300.0, 410.0, -1.0])
    np.testing.assert_allclose(ds.temp, [20.0, 22.0, 24.0, 24.0])
    assert ds.tau_s == 60.0


def test_quality_counts():
    _, rep = _merge()
    assert rep.power_rows == 7 and rep.cci_rows == 7
    assert rep.power_unparseable == 1
    assert rep.power_duplicates == 1
    assert rep.negative_power == 1
    assert rep.cci_unparseable == 1
    assert rep.cci_out_of_range == 1
    assert rep.cci_averaged_hours == 1
    assert rep.hours_without_cci == 1
    assert rep.merged_hours == 4
    assert rep.power_rows_accounted() == rep.power_rows
    text = quality_report(rep)
    assert "merged_hours: 4" in text and "dropped share: 20.0%" in text


def test_okta_scale():
    cci = "timestamp,cci\n2015-06-01T08:10:00+02:00,4\n2015-06-01T10:10:00+02:00,8\n2015-06-01T11:10:00+02:00,9\n"
    ds, rep = _merge(cci=cci, okta=True)
    np.testing.assert_allclose(ds.cloud, [0.5, 1.0])
    assert rep.cci_out_of_range == 1


def test_disjoint_ranges_give_empty_dataset():
    cci = "timestamp,cci\n2016-01-01T08:10:00+01:00,0.5\n"
    ds, rep = _merge(cci=cci)
    assert len(ds) == 0 and rep.merged_hours == 0 and rep.hours_without_cci == 5


def test_missing_columns():
    with pytest.raises(ValueError):
        _merge(power="timestamp,power\n2015-06-01T08:00:00+02:00,1\n")
    with pytest.raises(ValueError):
        _merge(cci="timestamp,cover\n")


def _year(rng, n_hours=24 * 60):
    times = pd.date_range("2015-03-01", periods=n_hours, freq="h", tz="UTC")
    power = pd.DataFrame({"timestamp": times.strftime("%Y-%m-%dT%H:%M:%S+00:00"),
                          "power_kw": rng.uniform(0, 900, n_hours).round(3), "temp_c": rng.uniform(0, 30, n_hours).round(2)})
    offsets = pd.to_timedelta(rng.uniform(0, 3600, n_hours), unit="s").round("s")
    cci = pd.DataFrame({"timestamp": (times + offsets).strftime("%Y-%m-%dT%H:%M:%S+00:00"),
                        "cci": rng.integers(0, 11, n_hours) / 10})
    return power, cci


def test_random_missing_reports(rng):
    power, cci = _year(rng)
    drop = rng.random(len(cci)) < 0.1
    ds, rep = merge_hourly(power, cci[~drop])
    assert rep.merged_hours == int((~drop).sum())
    assert rep.hours_without_cci == int(drop.sum())
    kept = pd.to_datetime(power.timestamp[~drop], utc=True)
    np.testing.assert_array_equal(ds.times, pd.DatetimeIndex(kept))
    np.testing.assert_allclose(ds.cloud, cci.cci[~drop])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_merge_is_permutation_invariant_and_idempotent(seed):
    rng = np.random.default_rng(seed)
    power, cci = _year(rng, 48)
    extra = cci.sample(frac=0.5, random_state=seed).assign(cci=lambda d: (d.cci + 0.3).clip(upper=1.0))
    cci = pd.concat([cci, extra])
    a, rep_a = merge_hourly(power, cci)
    b, _ = merge_hourly(power.sample(frac=1.0, random_state=seed + 1), cci.sample(frac=1.0, random_state=seed + 2))
    np.testing.assert_array_equal(a.times, b.times)
    np.testing.assert_allclose(a.cloud, b.cloud, rtol=1e-12)
    np.testing.assert_allclose(a.power, b.power)
    # re-merging the output with its own hourly cloud cover changes nothing
    again_p = pd.DataFrame({"timestamp": a.times.strftime("%Y-%m-%dT%H:%M:%S+00:00"), "power_kw": a.power, "temp_c": a.temp})
    again_c = pd.DataFrame({"timestamp": again_p.timestamp, "cci": a.cloud})
    c, rep_c = merge_hourly(again_p, again_c)
    np.testing.assert_array_equal(c.times, a.times)
    np.testing.assert_allclose(c.cloud, a.cloud)
    assert rep_c.merged_hours == rep_a.merged_hours
