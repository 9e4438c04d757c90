"""
Online estimation on noise-free data
====================================

Runs the N5 extended Kalman filter over a simulated year without noise,
starting from 75% of the true parameters, and prints the estimates at the
end of each month for a tight and a broad prior.
"""

import numpy as np

from cloudpv import model, simulator
from cloudpv.estimation import InitConfig, run_estimation
from cloudpv.solar import DaylightCalendar, interval_clear_sky

system = simulator.TrueSystem()
ds = simulator.simulate(0, seed=1, system=system)

# daylight samples only, with clear-sky irradiance averaged over each step
I0 = interval_clear_sky(system.location, system.orientation, ds.times, ds.tau_s)
cal = DaylightCalendar.from_series(ds.times, I0, system.tz, ds.tau_s)
i = cal.source_index
phi = model.regressor(cal.irradiance, ds.temp[i], ds.cloud[i])

truth = np.array(model.TRUE_PARAMS)
for l0 in (0.01, 1.0):
    cfg = InitConfig(l0=l0, r=1e4, mu0=tuple(0.75 * truth))
    traj = run_estimation(phi, ds.power[i], "N5", cfg)
    print(f"\nl0 = {l0}: relative error (%) at the end of each month")
    months = cal.local_times.month
    for m in range(1, 13):
        k = int(np.flatnonzero(months == m)[-1])
        err = 100 * (traj.params_after(k) / truth - 1)
        print(f"  month {m:2d}: " + " ".join(f"{e:7.3f}" for e in err))
