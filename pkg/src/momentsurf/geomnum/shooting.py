"""Rotational stationary surfaces by shooting the profile ODE.

The profile (f(s), z(s)) about the z-axis is unit speed with turning angle
theta: f' = cos(theta), z' = sin(theta).  With the chart-induced normal
N = (-sin(theta) cos(phi), -sin(theta) sin(phi), cos(theta)) the principal
curvatures are theta' (meridian) and sin(theta)/f (parallel), so the
stationarity equation H = alpha <N, Phi>/|Phi|^2 gives

    theta' = alpha (z cos(theta) - f sin(theta))/(f^2 + z^2) - sin(theta)/f.

On the axis (f < 1e-8) the parallel term tends to theta', and the equation
becomes theta' = F/2 with F the first term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

AXIS_TOL = 1e-8
PHI_TOL = 1e-10
BLOWUP = 1e8


class ShootingError(RuntimeError):
    """The integration left the domain where the profile ODE is regular."""


@dataclass(frozen=True)
class ProfileCurve:
    """Samples of a unit-speed profile: arc length, distance to axis, height, angle."""

    s: np.ndarray
    f: np.ndarray
    z: np.ndarray
    theta: np.ndarray

    def rows(self):
        return zip(self.s.tolist(), self.f.tolist(), self.z.tolist(), self.theta.tolist())


def _rhs(alpha: float, f: float, z: float, th: float, on_axis_ok: bool):
    c, sn = math.cos(th), math.sin(th)
    r2 = f * f + z * z
    if alpha == 0:
        F = 0.0
    else:
        if r2 < PHI_TOL ** 2:
            raise ShootingError("|Phi| -> 0 along the profile")
        F = alpha * (z * c - f * sn) / r2
    if abs(f) < AXIS_TOL:
        if not on_axis_ok:
            raise ShootingError("profile reached the axis away from the start")
        dth = 0.5 * F
    else:
        dth = F - sn / f
    return c, sn, dth


def shoot_rotational(alpha: float, init, arclen: float, step: float) -> ProfileCurve:
    """Integrate the rotational stationarity ODE with fixed-step classical RK4.

    Parameters
    ----------
    alpha : float
        Exponent of the energy density |Phi|^alpha.
    init : (f0, z0, theta0)
        Start point and turning angle; f0 = 0 starts on the axis.
    arclen : float
        Arc length to integrate.
    step : float
        Fixed step; the last step is shortened to land on ``arclen``.

    Returns
    -------
    ProfileCurve
    """
    if step <= 0 or arclen <= 0:
        raise ValueError("step and arclen must be positive")
    f, z, th = (float(x) for x in init)
    if f < 0:
        raise ValueError("f0 must be non-negative")
    nsteps = int(math.ceil(arclen / step - 1e-9))
    S = np.empty(nsteps + 1)
    Fv, Zv, Tv = np.empty(nsteps + 1), np.empty(nsteps + 1), np.empty(nsteps + 1)
    S[0], Fv[0], Zv[0], Tv[0] = 0.0, f, z, th
    s = 0.0
    for i in range(1, nsteps + 1):
        hstep = min(step, arclen - s)
        # the axis is allowed only while still leaving the starting point
        start = i == 1 and abs(Fv[0]) < AXIS_TOL
        k1 = _rhs(alpha, f, z, th, start)
        k2 = _rhs(alpha, f + 0.5 * hstep * k1[0], z + 0.5 * hstep * k1[1], th + 0.5 * hstep * k1[2], start)
        k3 = _rhs(alpha, f + 0.5 * hstep * k2[0], z + 0.5 * hstep * k2[1], th + 0.5 * hstep * k2[2], start)
        k4 = _rhs(alpha, f + hstep * k3[0], z + hstep * k3[1], th + hstep * k3[2], start)
        f += hstep / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        z += hstep / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        th += hstep / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        s = i * step if i < nsteps else arclen
        if not (math.isfinite(th) and abs(k1[2]) < BLOWUP):
            raise ShootingError(f"step instability near s = {s}")
        if f < -AXIS_TOL:
            raise ShootingError(f"profile crossed the axis at s = {s}")
        S[i], Fv[i], Zv[i], Tv[i] = s, f, z, th
    return ProfileCurve(S, Fv, Zv, Tv)


def profile_deviation(profile: ProfileCurve, f_exact, z_exact, smax: float | None = None) -> float:
    """Max distance between the samples and an exact parametrized profile."""
    mask = np.ones_like(profile.s, dtype=bool) if smax is None else profile.s <= smax + 1e-12
    s = profile.s[mask]
    d = np.hypot(profile.f[mask] - f_exact(s), profile.z[mask] - z_exact(s))
    return float(np.max(d))
