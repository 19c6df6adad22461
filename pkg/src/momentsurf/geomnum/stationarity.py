"""Stationarity residual, energy quadrature and the first variation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .surfaces import SurfaceSpec, surface_frame

PHI_TOL = 1e-12
QUADRATURE_N = 32


class SingularPointError(ValueError):
    """The position vector vanishes where the energy density needs it."""


def stationarity_residual(s: SurfaceSpec, alpha: float, u: float, v: float, h: float | None = None) -> float:
    """H - alpha <N, Phi>/|Phi|^2 at chart point (u, v), in 1/length.

    Zero exactly at points where the surface satisfies the Euler-Lagrange
    equation of the energy integral of |Phi|^alpha.
    """
    fr = surface_frame(s, u, v, h)
    r2 = float(np.dot(fr.position, fr.position))
    if r2 <= PHI_TOL ** 2:
        raise SingularPointError(f"Phi = 0 at (u, v) = ({u}, {v})")
    return float(fr.H - alpha * np.dot(fr.normal, fr.position) / r2)


def cell_centers(interval, n: int) -> np.ndarray:
    a, b = interval
    return a + (np.arange(n) + 0.5) * (b - a) / n


@dataclass
class ResidualGrid:
    """Grid scan of a surface: one row per evaluated node."""

    rows: list
    skipped: int

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r[-1] for r in self.rows])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.residuals))) if self.rows else float("nan")

    def min_abs(self) -> float:
        return float(np.min(np.abs(self.residuals))) if self.rows else float("nan")


def residual_grid(s: SurfaceSpec, alpha: float, n: int = 64, h: float | None = None) -> ResidualGrid:
    """Evaluate the residual on an n x n cell-centered grid over the patch.

    Rows are (u, v, x, y, z, H, K, residual); nodes with Phi = 0 are skipped
    and counted.
    """
    rows, skipped = [], 0
    for u in cell_centers(s.patch[0], n):
        for v in cell_centers(s.patch[1], n):
            fr = surface_frame(s, u, v, h)
            r2 = float(np.dot(fr.position, fr.position))
            if r2 <= PHI_TOL ** 2:
                skipped += 1
                continue
            res = fr.H - alpha * float(np.dot(fr.normal, fr.position)) / r2
            x, y, z = fr.position
            rows.append((float(u), float(v), float(x), float(y), float(z), fr.H, fr.K, float(res)))
    return ResidualGrid(rows, skipped)


# -- energy ---------------------------------------------------------------------------


def _gauss_nodes(interval, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    a, b = interval
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def _energy_of_chart(point, tangents, alpha: float, patch, n: int) -> float:
    uu, wu = _gauss_nodes(patch[0], n)
    vv, wv = _gauss_nodes(patch[1], n)
    U, V = np.meshgrid(uu, vv, indexing="ij")
    x = point(U, V)
    pu, pv = tangents(U, V)
    area = np.linalg.norm(np.cross(pu, pv), axis=-1)
    r = np.linalg.norm(x, axis=-1)
    if alpha < 0 and np.min(r) < PHI_TOL:
        raise SingularPointError("|Phi| vanishes at a quadrature node")
    dens = r ** alpha if alpha != 0 else np.ones_like(r)
    return float(np.einsum("i,j,ij->", wu, wv, dens * area))


def energy(s: SurfaceSpec, alpha: float, patch=None, n: int = QUADRATURE_N, h: float | None = None) -> float:
    """Integral of |Phi|^alpha over the patch by tensor Gauss-Legendre quadrature."""
    patch = s.patch if patch is None else patch
    return _energy_of_chart(s.point, lambda U, V: s.tangents(U, V, h), alpha, patch, n)


def first_variation(
    s: SurfaceSpec,
    alpha: float,
    phi: Callable,
    eps: float = 1e-4,
    patch=None,
    n: int = QUADRATURE_N,
    h: float = 1e-3,
) -> float:
    """Central difference (E(+eps) - E(-eps))/(2 eps) for Phi + t phi N.

    ``phi`` maps chart arrays (u, v) to the normal displacement.  Tangents of
    the displaced chart use fourth-order differences with step ``h`` times
    the chart scale.  For a smooth compactly supported phi this equals
    -integral of |Phi|^alpha (H - alpha <N, Phi>/|Phi|^2) phi dA.
    """
    patch = s.patch if patch is None else patch
    step = h * s.scale

    def displaced(t):
        def point(U, V):
            return s.point(U, V) + t * np.asarray(phi(U, V))[..., None] * s.normal(U, V)

        def tangents(U, V):
            f = point
            pu = (-f(U + 2 * step, V) + 8 * f(U + step, V) - 8 * f(U - step, V) + f(U - 2 * step, V)) / (12 * step)
            pv = (-f(U, V + 2 * step) + 8 * f(U, V + step) - 8 * f(U, V - step) + f(U, V - 2 * step)) / (12 * step)
            return pu, pv

        return point, tangents

    plus = _energy_of_chart(*displaced(eps), alpha, patch, n)
    minus = _energy_of_chart(*displaced(-eps), alpha, patch, n)
    return (plus - minus) / (2 * eps)


def variation_integral(s: SurfaceSpec, alpha: float, phi: Callable, patch=None, n: int = QUADRATURE_N) -> float:
    """-integral of |Phi|^alpha * residual * phi dA, the first variation by the residual."""
    patch = s.patch if patch is None else patch
    uu, wu = _gauss_nodes(patch[0], n)
    vv, wv = _gauss_nodes(patch[1], n)
    total = 0.0
    for i, u in enumerate(uu):
        for j, v in enumerate(vv):
            x = s.point(u, v)
            pu, pv = s.tangents(u, v)
            dA = float(np.linalg.norm(np.cross(pu, pv)))
            res = stationarity_residual(s, alpha, u, v)
            total += wu[i] * wv[j] * np.linalg.norm(x) ** alpha * res * float(phi(u, v)) * dA
    return -total


def random_smooth_field(s: SurfaceSpec, rng: np.random.Generator, degree: int = 3) -> Callable:
    """A random polynomial of the ambient coordinates, restricted to the surface."""
    powers = [(i, j, k) for i in range(degree + 1) for j in range(degree + 1 - i)
              for k in range(degree + 1 - i - j)]
    coef = rng.standard_normal(len(powers)) / np.sqrt(len(powers))

    def phi(U, V):
        x = s.point(U, V)
        X, Y, Z = x[..., 0], x[..., 1], x[..., 2]
        out = np.zeros(np.shape(X))
        for c, (i, j, k) in zip(coef, powers):
            out = out + c * X ** i * Y ** j * Z ** k
        return out

    return phi
