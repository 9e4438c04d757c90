"""
Clear-sky irradiance and the combined power model
=================================================

Sun position and clear-sky irradiance on a tilted panel for one summer
day, then the power of a 920 kW plant under a few cloud cover values.
"""

import numpy as np
import pandas as pd

from cloudpv import model
from cloudpv.solar import GeoLocation, SurfaceOrientation, reference_clear_sky, solar_position

# a plant in southern Sardinia, panels tilted 27 degrees towards south
loc = GeoLocation(39.2, 9.1)
panel = SurfaceOrientation.guideline(loc.latitude)
print(f"guideline tilt: {panel.tilt:.1f} deg")

times = pd.date_range("2015-06-21 04:00", "2015-06-21 21:00", freq="1h", tz="Europe/Rome")
pos = solar_position(loc, times)
I0 = reference_clear_sky(loc, panel, times)

# power for clear, half covered and overcast sky at 25 degC
print(f"{'time':>5} {'alt':>6} {'I0':>7} {'N=0':>7} {'N=0.5':>7} {'N=1':>7}")
for t, h, i in zip(times, np.degrees(pos.altitude), I0):
    p = [model.combined_power(i, 25.0, n, model.TRUE_PARAMS) for n in (0.0, 0.5, 1.0)]
    print(f"{t:%H:%M} {h:6.1f} {i:7.1f} " + " ".join(f"{v:7.1f}" for v in p))

# the same numbers through the linear regression form
phi = model.regressor(I0, 25.0, 0.5)
theta = model.theta(model.TRUE_PARAMS, "N5")
print("max |phi.theta - P| =", np.abs(phi @ theta - model.combined_power(I0, 25.0, 0.5, model.TRUE_PARAMS)).max())
