"""
Planar extremals of the weighted length
=======================================

The planar version of the energy is the integral of r^alpha ds.  The
residual kappa - alpha <n, gamma>/|gamma|^2 is first checked against a
polyline whose vertices are pushed along a bump field, then applied to
the curves r^(alpha+1) cos((alpha+1) theta) = 1.
"""

import math

import numpy as np

from momentsurf.geomnum import (
    euler_curve_residual,
    euler_residual_literal,
    hyperbola_curve,
    polyline_variation,
    power_cosine_curve,
    residual_variation,
    sec3_curve,
)

# discrete first variation vs the residual integral
for alpha, curve in ((2.0, sec3_curve()), (0.5, hyperbola_curve()), (1.0, hyperbola_curve())):
    lo, hi = curve.lo + 0.05, curve.hi - 0.05
    phi = lambda t: np.sin(math.pi * (t - lo) / (hi - lo)) ** 2  # noqa: E731
    disc = [polyline_variation(alpha, curve, phi, n, lo, hi) for n in (200, 2000)]
    print(f"{curve.name:10s} alpha={alpha:<4g} polyline {disc[0]:+.6f} / {disc[1]:+.6f}  "
          f"residual route {residual_variation(alpha, curve, phi, lo, hi):+.6f}")

# r^3 cos(3 theta) = 1 is extremal for alpha = 2; r^2 cos(2 theta) = 1 for alpha = 1
th = np.linspace(-math.pi / 4 + 0.05, math.pi / 4 - 0.05, 1001)
for alpha in (0.5, 1.0):
    print(f"hyperbola, alpha={alpha}: max |residual| = {np.max(np.abs(euler_curve_residual(alpha, hyperbola_curve(), th))):.2e}")

# the alpha = 1/2 member of the family is r^(3/2) cos(3 theta/2) = 1
c = power_cosine_curve(0.5)
th = np.linspace(c.lo + 0.05, c.hi - 0.05, 1001)
print(f"{c.name}: max |residual| = {np.max(np.abs(euler_curve_residual(0.5, c, th))):.2e}")

# reading the integrand as r^alpha sqrt(2 r'^2) gives a null Lagrangian,
# so every monotone branch satisfies its Euler-Lagrange equation
th = np.linspace(0.05, math.pi / 4 - 0.05, 101)
print("literal reading, hyperbola alpha=1/2:",
      f"{np.max(np.abs(euler_residual_literal(0.5, hyperbola_curve(), th))):.1e}")
