"""
Which isoparametric surfaces are stationary
===========================================

A surface is stationary for the energy integral of |Phi|^alpha when
H = alpha <N, Phi>/|Phi|^2 with H = kappa1 + kappa2 and S = -dN.
We scan the residual on planes, spheres and cylinders, then confirm the
classification by differentiating the energy itself.
"""

import math

import numpy as np

from momentsurf.geomnum import (
    cylinder,
    energy,
    first_variation,
    plane,
    random_smooth_field,
    residual_grid,
    sphere,
)

# planes through the origin work for every alpha
for alpha in (-4, -2, 0, 1, 3):
    g = residual_grid(plane((1.0, 2.0, 3.0)), alpha, 32)
    print(f"plane through 0, alpha={alpha:+d}: max |residual| = {g.max_abs():.1e}")

# spheres: centered at 0 needs alpha = -2, through 0 needs alpha = -4
print(f"sphere centered at 0, alpha=-2: {residual_grid(sphere(), -2, 32).max_abs():.1e}")
print(f"sphere through 0, alpha=-4:     {residual_grid(sphere(1.0, (0, 0, 1)), -4, 32).max_abs():.1e}")
print(f"sphere centered at 0, alpha=-4: {residual_grid(sphere(), -4, 32).max_abs():.1e}")

# the unit cylinder has residual -1 - alpha/(1 + z^2): never zero on an open set,
# but for alpha < -1 it vanishes along two circles
z = np.linspace(-2, 2, 9)
for alpha in (-4, -2, 0, 2):
    print(f"cylinder alpha={alpha:+d}: residual along z =", np.round(-1 - alpha / (1 + z ** 2), 3))

# energy route: the first variation of the centered sphere vanishes for alpha = -2
s = sphere()
rng = np.random.default_rng(1)
vals = [first_variation(s, -2.0, random_smooth_field(s, rng)) for _ in range(5)]
print("first variation, centered sphere, alpha=-2:", ["%.1e" % v for v in vals])

# and the dilation derivative of 4 pi r^(2 + alpha) at r = 1
for alpha in (-1.0, 0.0, 1.0):
    dv = first_variation(s, alpha, lambda U, V: np.ones(np.shape(U)))
    print(f"dilation, alpha={alpha:+.0f}: {dv:.8f} vs {4 * math.pi * (2 + alpha):.8f}")

print(f"energy of the unit sphere, alpha=3: {energy(s, 3.0):.12f} (4 pi = {4 * math.pi:.12f})")
