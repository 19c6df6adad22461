"""Parametric surfaces, frames and curvatures.

Sign convention: the shape operator is S = -dN and H = kappa1 + kappa2 is the
sum of the principal curvatures.  With the outward normal a sphere of radius
R has kappa = -1/R and H = -2/R, so the centered unit sphere solves
H = alpha <N, Phi>/|Phi|^2 for alpha = -2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

FD_STEP = 1e-4
IMMERSION_TOL = 1e-12


class DegenerateChartError(ValueError):
    """The chart is not immersed at the requested point."""


@dataclass(frozen=True)
class FrameSample:
    """Position, unit normal and curvatures at one chart point.

    Attributes
    ----------
    position, normal : ndarray, shape (3,)
    H : float
        kappa1 + kappa2, in 1/length.
    K : float
        kappa1 * kappa2, in 1/length^2.
    kappa1, kappa2 : float
        Principal curvatures with kappa1 >= kappa2.
    """

    position: np.ndarray
    normal: np.ndarray
    H: float
    K: float
    kappa1: float
    kappa2: float


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector")
    return v / n


def _basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal e1, e2 with (e1, e2, n) positively oriented."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = _unit(helper - np.dot(helper, n) * n)
    e2 = np.cross(n, e1)
    return e1, e2


@dataclass(frozen=True)
class SurfaceSpec:
    """A surface kind together with its chart.

    Build instances with :func:`plane`, :func:`sphere`, :func:`cylinder`,
    :func:`rotational` or :func:`analytic`.  ``sign`` is +1 for the
    stated (outward, or chart-induced) orientation and -1 for the flipped one.
    """

    kind: str
    params: dict
    patch: tuple
    sign: int = 1
    scale: float = 1.0
    chart: Callable | None = field(default=None, compare=False, repr=False)

    def flipped(self) -> "SurfaceSpec":
        return SurfaceSpec(self.kind, self.params, self.patch, -self.sign, self.scale, self.chart)

    def with_patch(self, patch) -> "SurfaceSpec":
        return SurfaceSpec(self.kind, self.params, tuple(patch), self.sign, self.scale, self.chart)

    def rotated(self, Q) -> "SurfaceSpec":
        """The image under an orthogonal map Q fixing the origin."""
        Q = np.asarray(Q, dtype=float)
        if self.kind in ("plane", "sphere", "cylinder"):
            # rotate every stored vector so chart points correspond
            p = {k: (Q @ v if isinstance(v, np.ndarray) and v.shape == (3,) else v)
                 for k, v in self.params.items()}
            if self.kind == "sphere":
                p["frame"] = Q @ self.params["frame"]
            return SurfaceSpec(self.kind, p, self.patch, self.sign, self.scale)
        base = self.chart
        spec = analytic(lambda u, v: Q @ base(u, v), self.patch, self.scale)
        return spec if self.sign > 0 else spec.flipped()

    # -- chart ---------------------------------------------------------------

    def point(self, u, v) -> np.ndarray:
        """Position; u, v may be arrays (result has a trailing axis of 3)."""
        p = self.params
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "plane":
            return p["origin"] + u[..., None] * p["e1"] + v[..., None] * p["e2"]
        if self.kind == "sphere":
            su = np.sin(u)
            radial = np.stack([su * np.cos(v), su * np.sin(v), np.cos(u)], axis=-1)
            return p["center"] + p["radius"] * radial @ p["frame"].T
        if self.kind == "cylinder":
            radial = np.cos(u)[..., None] * p["e1"] + np.sin(u)[..., None] * p["e2"]
            return p["point"] + p["radius"] * radial + v[..., None] * p["direction"]
        return np.asarray(self.chart(u, v), dtype=float)

    def tangents(self, u, v, h: float | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Phi_u, Phi_v; closed form where available, else fourth-order differences."""
        p = self.params
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "plane":
            ones = np.ones(np.broadcast(u, v).shape + (1,))
            return ones * p["e1"], ones * p["e2"]
        if self.kind == "sphere":
            R = p["radius"]
            cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
            pu = R * np.stack([cu * cv, cu * sv, -su], axis=-1)
            pv = R * np.stack([-su * sv, su * cv, 0.0 * su], axis=-1)
            return pu @ p["frame"].T, pv @ p["frame"].T
        if self.kind == "cylinder":
            R = p["radius"]
            pu = R * (-np.sin(u)[..., None] * p["e1"] + np.cos(u)[..., None] * p["e2"])
            pv = np.ones(np.broadcast(u, v).shape + (1,)) * p["direction"]
            return pu, pv
        h = (FD_STEP if h is None else h) * self.scale
        f = self.point
        pu = (-f(u + 2 * h, v) + 8 * f(u + h, v) - 8 * f(u - h, v) + f(u - 2 * h, v)) / (12 * h)
        pv = (-f(u, v + 2 * h) + 8 * f(u, v + h) - 8 * f(u, v - h) + f(u, v - 2 * h)) / (12 * h)
        return pu, pv

    def normal(self, u, v, h: float | None = None) -> np.ndarray:
        p = self.params
        if self.kind == "plane":
            n = np.ones(np.broadcast(np.asarray(u), np.asarray(v)).shape + (1,)) * p["normal"]
        elif self.kind == "sphere":
            n = (self.point(u, v) - p["center"]) / p["radius"]
        elif self.kind == "cylinder":
            x = self.point(u, v) - p["point"]
            x = x - np.sum(x * p["direction"], axis=-1)[..., None] * p["direction"]
            n = x / p["radius"]
        else:
            pu, pv = self.tangents(u, v, h)
            c = np.cross(pu, pv)
            n = c / np.linalg.norm(c, axis=-1)[..., None]
        return self.sign * n


def plane(normal=(0.0, 0.0, 1.0), offset: float = 0.0, patch=((-1.0, 1.0), (-1.0, 1.0)), sign: int = 1) -> SurfaceSpec:
    """The plane <n, x> = offset, charted by orthonormal coordinates around offset*n."""
    n = _unit(normal)
    e1, e2 = _basis(n)
    params = {"normal": n, "offset": float(offset), "origin": float(offset) * n, "e1": e1, "e2": e2}
    return SurfaceSpec("plane", params, _patch(patch), sign)


def sphere(radius: float = 1.0, center=(0.0, 0.0, 0.0), patch=((0.0, np.pi), (0.0, 2 * np.pi)), sign: int = 1) -> SurfaceSpec:
    """Sphere with polar angle u and azimuth v; sign=+1 is the outward normal."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    params = {"radius": float(radius), "center": np.asarray(center, dtype=float), "frame": np.eye(3)}
    return SurfaceSpec("sphere", params, _patch(patch), sign, float(radius))


def cylinder(radius: float = 1.0, point=(0.0, 0.0, 0.0), direction=(0.0, 0.0, 1.0),
             patch=((0.0, 2 * np.pi), (-2.0, 2.0)), sign: int = 1) -> SurfaceSpec:
    """Circular cylinder; u is the angle around the axis, v the axial coordinate."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    d = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(d) - 1.0) > 1e-12:
        raise ValueError("axis direction must have unit length")
    e1, e2 = _basis(d)
    params = {"radius": float(radius), "point": np.asarray(point, dtype=float), "direction": d, "e1": e1, "e2": e2}
    return SurfaceSpec("cylinder", params, _patch(patch), sign, float(radius))


def analytic(chart: Callable, patch, scale: float = 1.0) -> SurfaceSpec:
    """Surface given by a vectorized map (u, v) -> (..., 3); normal Phi_u x Phi_v."""
    return SurfaceSpec("analytic", {}, _patch(patch), 1, float(scale), chart)


def rotational(profile, patch=None) -> SurfaceSpec:
    """Surface of revolution about the z-axis of a sampled unit-speed profile.

    The profile (f(s), z(s)) is interpolated by cubic splines; u = s and v is
    the rotation angle.
    """
    from scipy.interpolate import CubicSpline

    s = np.asarray(profile.s, dtype=float)
    fs = CubicSpline(s, np.asarray(profile.f, dtype=float))
    zs = CubicSpline(s, np.asarray(profile.z, dtype=float))

    def chart(u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        f = fs(u)
        return np.stack([f * np.cos(v), f * np.sin(v), zs(u) + 0.0 * v], axis=-1)

    if patch is None:
        patch = ((float(s[0]), float(s[-1])), (0.0, 2 * np.pi))
    spec = SurfaceSpec("rotational", {"s0": float(s[0]), "s1": float(s[-1])}, _patch(patch), 1,
                       max(1.0, float(np.max(np.abs(profile.f)))), chart)
    return spec


def _patch(patch) -> tuple:
    (a, b), (c, d) = patch
    return ((float(a), float(b)), (float(c), float(d)))


# -- curvature ---------------------------------------------------------------------


def _closed_form(s: SurfaceSpec, u: float, v: float) -> FrameSample:
    x = s.point(u, v)
    n = s.normal(u, v)
    if s.kind == "plane":
        k1 = k2 = 0.0
    elif s.kind == "sphere":
        k1 = k2 = -s.sign / s.params["radius"]
    else:
        k = -s.sign / s.params["radius"]
        k1, k2 = max(k, 0.0), min(k, 0.0)
    return FrameSample(x, n, k1 + k2, k1 * k2, k1, k2)


def _second_derivatives(s: SurfaceSpec, u: float, v: float, h: float):
    f = s.point
    x = f(u, v)
    fu_p, fu_m = f(u + h, v), f(u - h, v)
    fv_p, fv_m = f(u, v + h), f(u, v - h)
    pu = (fu_p - fu_m) / (2 * h)
    pv = (fv_p - fv_m) / (2 * h)
    puu = (fu_p - 2 * x + fu_m) / h ** 2
    pvv = (fv_p - 2 * x + fv_m) / h ** 2
    puv = (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h ** 2)
    return x, pu, pv, puu, puv, pvv


def curvatures_from_forms(pu, pv, puu, puv, pvv, sign: int = 1):
    """Normal and (H, K, kappa1, kappa2) from first and second partials."""
    E, F, G = np.dot(pu, pu), np.dot(pu, pv), np.dot(pv, pv)
    det = E * G - F * F
    if det <= IMMERSION_TOL:
        raise DegenerateChartError("first fundamental form is singular")
    c = np.cross(pu, pv)
    n = sign * c / np.linalg.norm(c)
    L, M, N = np.dot(puu, n), np.dot(puv, n), np.dot(pvv, n)
    H = (E * N - 2 * F * M + G * L) / det
    K = (L * N - M * M) / det
    disc = max(H * H / 4 - K, 0.0)
    root = np.sqrt(disc)
    return n, H, K, H / 2 + root, H / 2 - root


def surface_frame(s: SurfaceSpec, u: float, v: float, h: float | None = None) -> FrameSample:
    """Frame at chart point (u, v).

    Plane, sphere and cylinder use closed forms; other kinds use second-order
    central differences with step ``h`` (default 1e-4 times the chart scale).
    """
    if s.kind in ("plane", "sphere", "cylinder"):
        return _closed_form(s, u, v)
    h = (FD_STEP if h is None else h) * s.scale
    x, pu, pv, puu, puv, pvv = _second_derivatives(s, float(u), float(v), h)
    n, H, K, k1, k2 = curvatures_from_forms(pu, pv, puu, puv, pvv, s.sign)
    return FrameSample(x, n, float(H), float(K), float(k1), float(k2))
