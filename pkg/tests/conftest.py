import numpy as np
import pytest

from cloudpv import experiment as ex
from cloudpv import model, simulator
from cloudpv.solar import DaylightCalendar, interval_clear_sky

ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def system():
    return simulator.TrueSystem()


@pytest.fixture(scope="session")
def sid0_year(system):
    """Noise-free 15-minute year and its daylight regressors."""
    ds = simulator.simulate(0, seed=1, system=system)
    I0 = interval_clear_sky(system.location, system.orientation, ds.times, ds.tau_s)
    cal = DaylightCalendar.from_series(ds.times, I0, system.tz, ds.tau_s)
    i = cal.source_index
    phi = model.regressor(cal.irradiance, ds.temp[i], ds.cloud[i])
    return ds, cal, phi, ds.power[i]


@pytest.fixture(scope="session")
def sid12_result():
    ds = simulator.simulate(12, seed=5)
    return ds, ex.run_dataset(ds, ex.ExperimentConfig.simulation())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
