"""
Shooting rotational profiles
============================

For a surface of revolution the stationarity equation becomes an ODE for
the turning angle of a unit-speed profile.  Starting on the axis (or on an
equator) reproduces the spheres, and a fixed-step RK4 shows its order
until rounding takes over.
"""

import math

import numpy as np

from momentsurf.geomnum import profile_deviation, residual_grid, rotational, shoot_rotational

# alpha = -2 from the south pole of the unit sphere
for step in (0.1, 0.05, 0.025, 0.0125, 1e-3, 1e-4):
    prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), math.pi - 0.1, step)
    dev = profile_deviation(prof, np.sin, lambda s: -np.cos(s))
    print(f"step {step:<8g} max deviation from the unit circle {dev:.2e}")

# alpha = -4 from the equator of the sphere through the origin
prof = shoot_rotational(-4.0, (1.0, 1.0, math.pi / 2), math.pi / 2 - 0.1, 1e-4)
print("sphere through 0:", f"{profile_deviation(prof, np.cos, lambda s: 1 + np.sin(s)):.1e}")

# alpha = 0 through the axis gives a horizontal plane
prof = shoot_rotational(0.0, (0.0, 0.5, 0.0), 1.0, 1e-2)
print("alpha = 0 profile heights:", np.unique(prof.z))

# the shot profile, re-read as a surface, is stationary pointwise
prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), math.pi - 0.1, 1e-3)
surf = rotational(prof, ((0.2, math.pi - 0.3), (0.0, 2 * math.pi)))
print("rotational surface residual:", f"{residual_grid(surf, -2.0, 16).max_abs():.1e}")
