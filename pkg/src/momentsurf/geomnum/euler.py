"""Planar extremals of the weighted length integral of r^alpha ds.

For a curve gamma with unit tangent T, normal n = J T (J the quarter turn)
and signed curvature kappa = <T', n>, the Euler-Lagrange equation of the
integral of |gamma|^alpha ds is

    kappa = alpha <n, gamma>/|gamma|^2,

and the first variation along the normal field phi n is
-integral of |gamma|^alpha (kappa - alpha <n, gamma>/|gamma|^2) phi ds.
The residual is checked against a polyline discretization in
:func:`polyline_variation`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class PolarCurve:
    """r(theta) with first and second derivatives on [lo, hi]."""

    r: Callable
    dr: Callable
    d2r: Callable
    lo: float
    hi: float
    name: str = ""

    def point(self, theta):
        r = self.r(theta)
        return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def _check_r(r):
    if np.any(np.asarray(r) <= 0):
        raise ValueError("r must be positive")


def euler_curve_residual(alpha: float, curve: PolarCurve, theta) -> float:
    """kappa - alpha <n, gamma>/|gamma|^2 at theta, reading the integrand as r^alpha sqrt(r'^2 + r^2)."""
    r, rp, rpp = curve.r(theta), curve.dr(theta), curve.d2r(theta)
    _check_r(r)
    speed2 = r * r + rp * rp
    kappa = (r * r + 2 * rp * rp - r * rpp) / speed2 ** 1.5
    # <n, gamma> = -r^2/|gamma'| with n = J T
    n_dot_gamma = -r * r / np.sqrt(speed2)
    return kappa - alpha * n_dot_gamma / (r * r)


def euler_residual_literal(alpha: float, curve: PolarCurve, theta, h: float = 1e-5) -> float:
    """Euler-Lagrange expression of the integrand read literally as r^alpha sqrt(2 r'^2).

    d/dtheta (dL/dr') - dL/dr, with the theta-derivative taken by central
    differences.  The literal integrand is a null Lagrangian (it equals
    sqrt(2) d(r^(alpha+1))/(alpha+1) up to sign), so this vanishes for any
    monotone r.
    """
    def dL_drp(t):
        return math.sqrt(2) * curve.r(t) ** alpha * np.sign(curve.dr(t))

    r, rp = curve.r(theta), curve.dr(theta)
    _check_r(r)
    dL_dr = math.sqrt(2) * alpha * r ** (alpha - 1) * np.abs(rp)
    return (dL_drp(theta + h) - dL_drp(theta - h)) / (2 * h) - dL_dr


# -- discrete oracle ----------------------------------------------------------------


def polyline_energy(points: np.ndarray, alpha: float) -> float:
    """Midpoint rule for the integral of |x|^alpha ds along a polyline."""
    seg = np.diff(points, axis=0)
    mid = 0.5 * (points[1:] + points[:-1])
    return float(np.sum(np.linalg.norm(mid, axis=1) ** alpha * np.linalg.norm(seg, axis=1)))


def polyline_variation(alpha: float, curve: PolarCurve, phi: Callable, segments: int = 200,
                       lo: float | None = None, hi: float | None = None, eps: float = 1e-6) -> float:
    """Discrete first variation of the polyline energy along phi n.

    Vertices sit at equally spaced theta; each is displaced by t phi(theta) n
    with n = J T from the exact curve, and the derivative in t is a central
    difference.
    """
    lo = curve.lo if lo is None else lo
    hi = curve.hi if hi is None else hi
    th = np.linspace(lo, hi, segments + 1)
    pts = curve.point(th)
    r, rp = curve.r(th), curve.dr(th)
    tang = np.stack([rp * np.cos(th) - r * np.sin(th), rp * np.sin(th) + r * np.cos(th)], axis=-1)
    tang /= np.linalg.norm(tang, axis=1)[:, None]
    normal = np.stack([-tang[:, 1], tang[:, 0]], axis=-1)
    disp = phi(th)[:, None] * normal
    return (polyline_energy(pts + eps * disp, alpha) - polyline_energy(pts - eps * disp, alpha)) / (2 * eps)


def residual_variation(alpha: float, curve: PolarCurve, phi: Callable, lo: float | None = None,
                       hi: float | None = None, n: int = 64) -> float:
    """-integral of r^alpha * residual * phi ds by Gauss-Legendre quadrature in theta."""
    lo = curve.lo if lo is None else lo
    hi = curve.hi if hi is None else hi
    x, w = np.polynomial.legendre.leggauss(n)
    th = lo + 0.5 * (hi - lo) * (x + 1.0)
    w = 0.5 * (hi - lo) * w
    r, rp = curve.r(th), curve.dr(th)
    ds = np.sqrt(r * r + rp * rp)
    res = euler_curve_residual(alpha, curve, th)
    return float(-np.sum(w * r ** alpha * res * phi(th) * ds))


# -- named curves -------------------------------------------------------------------


def sec3_curve() -> PolarCurve:
    """r = sec(3 theta)^(1/3), the alpha = 2 extremal, on |theta| < pi/6."""
    def r(t):
        return np.cos(3 * t) ** (-1.0 / 3.0)

    def dr(t):
        return r(t) * np.tan(3 * t)

    def d2r(t):
        return r(t) * (np.tan(3 * t) ** 2 + 3.0 / np.cos(3 * t) ** 2)

    return PolarCurve(r, dr, d2r, -math.pi / 6, math.pi / 6, "sec3")


def hyperbola_curve() -> PolarCurve:
    """Rectangular hyperbola r^2 cos(2 theta) = 1 on |theta| < pi/4."""
    def r(t):
        return np.cos(2 * t) ** -0.5

    def dr(t):
        return r(t) * np.tan(2 * t)

    def d2r(t):
        return r(t) * (np.tan(2 * t) ** 2 + 2.0 / np.cos(2 * t) ** 2)

    return PolarCurve(r, dr, d2r, -math.pi / 4, math.pi / 4, "hyperbola")


def power_cosine_curve(alpha: float) -> PolarCurve:
    """r^(alpha+1) cos((alpha+1) theta) = 1, an extremal for the given alpha (alpha != -1)."""
    m = alpha + 1.0
    if m == 0:
        raise ValueError("alpha = -1 has no curve of this family")
    half = math.pi / (2 * abs(m))

    def r(t):
        return np.cos(m * t) ** (-1.0 / m)

    def dr(t):
        return r(t) * np.tan(m * t)

    def d2r(t):
        return r(t) * (np.tan(m * t) ** 2 + m / np.cos(m * t) ** 2)

    return PolarCurve(r, dr, d2r, -half, half, f"power_cosine({alpha})")


def line_curve() -> PolarCurve:
    """The straight line x = 1, r = sec(theta)."""
    def r(t):
        return 1.0 / np.cos(t)

    def dr(t):
        return np.tan(t) / np.cos(t)

    def d2r(t):
        return (1.0 + np.sin(t) ** 2) / np.cos(t) ** 3

    return PolarCurve(r, dr, d2r, -math.pi / 2, math.pi / 2, "line")


CURVES = {"sec3": sec3_curve, "hyperbola": hyperbola_curve, "line": line_curve}
