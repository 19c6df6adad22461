"""Numeric geometry: frames, residuals, energy, variations, shooting, planar curves."""

import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentsurf.geomnum import (
    DegenerateChartError,
    PolarCurve,
    ShootingError,
    SingularPointError,
    analytic,
    cylinder,
    energy,
    euler_curve_residual,
    euler_residual_literal,
    first_variation,
    hyperbola_curve,
    line_curve,
    plane,
    polyline_variation,
    power_cosine_curve,
    profile_deviation,
    random_smooth_field,
    residual_grid,
    residual_variation,
    rotational,
    sec3_curve,
    shoot_rotational,
    sphere,
    stationarity_residual,
    surface_frame,
    variation_integral,
    write_csv,
)
from momentsurf.geomnum.io import PROFILE_HEADER, RESIDUAL_HEADER

FOUR_PI = 4 * math.pi


def sphere_chart(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    return np.stack([np.sin(u) * np.cos(v), np.sin(u) * np.sin(v), np.cos(u)], axis=-1)


def cylinder_chart(u, v):
    u, v = np.asarray(u, float), np.asarray(v, float)
    return np.stack([np.cos(u), np.sin(u), v + 0.0 * u], axis=-1)


def bump(center, width):
    """Smooth compactly supported bump in chart coordinates."""
    def phi(U, V):
        d2 = ((np.asarray(U) - center[0]) ** 2 + (np.asarray(V) - center[1]) ** 2) / width ** 2
        out = np.zeros(np.shape(d2))
        inside = d2 < 1
        out[inside] = np.exp(1 - 1 / (1 - d2[inside]))
        return out
    return phi


def random_rotation(seed):
    q, r = np.linalg.qr(np.random.default_rng(seed).standard_normal((3, 3)))
    return q * np.sign(np.diag(r))


# -- frames --------------------------------------------------------------------------


def test_frame_examples():
    fr = surface_frame(sphere(), 0.7, 1.1)
    assert fr.H == -2 and fr.K == 1
    fr = surface_frame(plane(), 0.3, -0.2)
    assert fr.H == 0 and fr.K == 0
    fr = surface_frame(cylinder(), 0.3, 0.5)
    assert fr.K == 0 and abs(fr.H) == 1


SURFACES = [
    analytic(sphere_chart, ((0.3, 2.8), (0.0, 6.0))),
    analytic(cylinder_chart, ((0.0, 6.0), (-2.0, 2.0))),
    analytic(lambda u, v: np.stack([u, v, 0.3 * u ** 2 - 0.2 * u * v + 0.1 * v ** 3], axis=-1),
             ((-1.0, 1.0), (-1.0, 1.0))),
    sphere(2.0, (0.1, 0.2, -0.3), ((0.2, 3.0), (0.0, 6.2))),
    cylinder(0.5, (1.0, 0.0, 0.0), (0.0, 0.6, 0.8)),
]


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.sampled_from(SURFACES), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_frame_invariants(s, tu, tv):
    (u0, u1), (v0, v1) = s.patch
    fr = surface_frame(s, u0 + tu * (u1 - u0), v0 + tv * (v1 - v0))
    assert abs(np.linalg.norm(fr.normal) - 1) <= 1e-12
    scale = max(1.0, abs(fr.H))
    assert abs(fr.H - (fr.kappa1 + fr.kappa2)) <= 1e-9 * scale
    assert abs(fr.K - fr.kappa1 * fr.kappa2) <= 1e-9 * max(1.0, abs(fr.K))
    assert fr.kappa1 >= fr.kappa2


@pytest.mark.parametrize("chart,closed", [
    (sphere_chart, sphere()),
    (cylinder_chart, cylinder()),
])
def test_finite_differences_are_second_order(chart, closed):
    s = analytic(chart, closed.patch)
    u, v = 1.1, 0.4
    exact = surface_frame(closed, u, v)
    errs = [abs(surface_frame(s, u, v, h).H - exact.H) for h in (2e-2, 1e-2)]
    assert 3 <= errs[0] / errs[1] <= 5


def test_analytic_orientation_matches_closed_form():
    u, v = 1.0, 2.0
    assert surface_frame(analytic(sphere_chart, sphere().patch), u, v).H == pytest.approx(-2, abs=1e-6)
    assert surface_frame(analytic(cylinder_chart, cylinder().patch), u, v).H == pytest.approx(-1, abs=1e-6)


def test_degenerate_chart():
    s = analytic(lambda u, v: np.stack([u, u, 0.0 * v], axis=-1), ((0, 1), (0, 1)))
    with pytest.raises(DegenerateChartError):
        surface_frame(s, 0.5, 0.5)


@pytest.mark.parametrize("s", SURFACES, ids=lambda s: s.kind)
def test_orientation_flip(s):
    (u0, u1), (v0, v1) = s.patch
    u, v = 0.37 * u0 + 0.63 * u1, 0.55 * v0 + 0.45 * v1
    a, b = surface_frame(s, u, v), surface_frame(s.flipped(), u, v)
    assert b.H == pytest.approx(-a.H, abs=1e-12) and b.K == pytest.approx(a.K, abs=1e-12)
    r, rf = stationarity_residual(s, 1.5, u, v), stationarity_residual(s.flipped(), 1.5, u, v)
    assert rf == pytest.approx(-r, abs=1e-12)


@pytest.mark.parametrize("s", SURFACES, ids=lambda s: s.kind)
def test_rotation_invariance(s):
    Q = random_rotation(7)
    (u0, u1), (v0, v1) = s.patch
    u, v = 0.41 * u0 + 0.59 * u1, 0.3 * v0 + 0.7 * v1
    r = stationarity_residual(s, -1.5, u, v)
    assert stationarity_residual(s.rotated(Q), -1.5, u, v) == pytest.approx(r, abs=1e-10 if s.kind != "analytic" else 1e-6)


# -- residuals -----------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [-4, -2, 0, 1, 3, 7])
def test_plane_through_origin_is_stationary(alpha):
    assert residual_grid(plane((1, 2, 3)), alpha, 16).max_abs() <= 1e-12


def test_sphere_examples():
    assert residual_grid(sphere(), -2, 16).max_abs() <= 1e-12
    g = residual_grid(sphere(1.0, (0, 0, 1)), -4, 16)
    assert g.max_abs() <= 1e-10 and g.skipped == 0


def test_cylinder_closed_form_residual():
    s = cylinder()
    for z in (-1.5, 0.0, 0.7):
        for alpha in (-4, -2, 0, 2):
            assert stationarity_residual(s, alpha, 0.3, z) == pytest.approx(-1 - alpha / (1 + z * z), abs=1e-14)


def test_singular_point():
    s = plane()
    with pytest.raises(SingularPointError):
        stationarity_residual(s, 1.0, 0.0, 0.0)
    g = residual_grid(s.with_patch(((-1, 1), (-1, 1))), 1.0, 3)
    assert g.skipped == 1 and len(g.rows) == 8


# -- energy and variation ------------------------------------------------------------


@pytest.mark.parametrize("alpha", [-4, -2, 0, 1, 2])
def test_unit_sphere_energy(alpha):
    assert energy(sphere(), alpha) == pytest.approx(FOUR_PI, abs=1e-8)


@pytest.mark.parametrize("radius,alpha", [(2.0, -1.0), (0.5, 3.0), (1.7, 0.5)])
def test_sphere_energy_scaling(radius, alpha):
    assert energy(sphere(radius), alpha) == pytest.approx(FOUR_PI * radius ** (2 + alpha), rel=1e-10)


def test_annulus_energy():
    # polar chart of the plane z = 0
    ann = analytic(lambda r, t: np.stack([r * np.cos(t), r * np.sin(t), 0.0 * r], axis=-1),
                   ((0.5, 2.0), (0.0, 2 * math.pi)))
    for alpha in (-3.0, 1.0, 2.5):
        want = 2 * math.pi * (2.0 ** (alpha + 2) - 0.5 ** (alpha + 2)) / (alpha + 2)
        assert energy(ann, alpha) == pytest.approx(want, rel=1e-9)


def test_energy_singular_integrand():
    with pytest.raises(SingularPointError):
        energy(sphere(1.0, (0, 0, 1)), -4, patch=((math.pi - 1e-13, math.pi), (0, 1)), n=2)


def test_plane_bump_variation_vanishes():
    phi = bump((0.3, -0.2), 0.5)
    assert abs(first_variation(plane(), 1.0, phi, patch=((-0.2, 0.8), (-0.7, 0.3)))) <= 1e-6


def test_sphere_random_variations_vanish():
    rng = np.random.default_rng(0)
    s = sphere()
    for _ in range(3):
        assert abs(first_variation(s, -2.0, random_smooth_field(s, rng))) <= 1e-5


def test_dilation_variation():
    ones = lambda U, V: np.ones(np.shape(U))  # noqa: E731
    assert first_variation(sphere(), -1.0, ones) == pytest.approx(FOUR_PI, abs=1e-4)
    assert first_variation(sphere(), 1.0, ones) == pytest.approx(3 * FOUR_PI, abs=1e-4)


def test_variation_matches_residual_integral():
    """Dual route on a non-stationary surface: energy difference vs residual integral."""
    s = cylinder(1.0, (0.3, 0.0, 0.0)).with_patch(((0.0, 2 * math.pi), (-1.0, 1.0)))
    phi = lambda U, V: np.cos(np.asarray(V) * math.pi / 2) ** 2  # noqa: E731
    fd = first_variation(s, 1.0, phi)
    direct = variation_integral(s, 1.0, phi)
    assert fd == pytest.approx(direct, rel=1e-6)


# -- shooting ------------------------------------------------------------------------


def test_shoot_centered_sphere():
    prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), math.pi - 0.1, 1e-3)
    assert profile_deviation(prof, np.sin, lambda s: -np.cos(s)) <= 1e-6


def test_shoot_sphere_through_origin_from_equator():
    prof = shoot_rotational(-4.0, (1.0, 1.0, math.pi / 2), math.pi / 2 - 0.1, 1e-3)
    assert profile_deviation(prof, np.cos, lambda s: 1 + np.sin(s)) <= 1e-6


def test_shoot_plane():
    prof = shoot_rotational(0.0, (0.0, 0.5, 0.0), 2.0, 1e-2)
    assert np.all(prof.z == 0.5) and prof.f[-1] == pytest.approx(2.0)


def test_shoot_is_unit_speed():
    prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), 2.5, 1e-3)
    ds = np.diff(prof.s)
    speed2 = np.diff(prof.f) ** 2 + np.diff(prof.z) ** 2
    assert np.all(np.abs(speed2 / ds ** 2 - 1) <= 1e-6)
    assert prof.s[-1] == 2.5


def test_shoot_errors():
    with pytest.raises(ValueError):
        shoot_rotational(-2.0, (0, -1, 0), 1.0, 0.0)
    with pytest.raises(ShootingError):
        shoot_rotational(-4.0, (1.0, 1.0, math.pi / 2), 3.0, 1e-3)
    with pytest.raises(ShootingError):
        shoot_rotational(-2.0, (0.0, 0.0, 0.0), 1.0, 1e-2)


def test_shot_profile_is_stationary_as_a_surface():
    prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), math.pi - 0.1, 1e-3)
    s = rotational(prof, ((0.2, math.pi - 0.3), (0.0, 2 * math.pi)))
    assert residual_grid(s, -2.0, 8).max_abs() <= 1e-5


# -- planar curves -------------------------------------------------------------------


def test_euler_examples():
    th = np.linspace(-math.pi / 6 + 0.05, math.pi / 6 - 0.05, 101)
    assert np.max(np.abs(euler_curve_residual(2.0, sec3_curve(), th))) <= 1e-8
    th = np.linspace(-1.5, 1.5, 101)
    assert np.max(np.abs(euler_curve_residual(0.0, line_curve(), th))) <= 1e-12


def test_hyperbola_is_extremal_for_alpha_one():
    # r^2 cos(2 theta) = 1 belongs to the family r^(alpha+1) cos((alpha+1) theta) = 1 with alpha = 1
    th = np.linspace(-math.pi / 4 + 0.05, math.pi / 4 - 0.05, 101)
    assert np.max(np.abs(euler_curve_residual(1.0, hyperbola_curve(), th))) <= 1e-8
    assert np.max(np.abs(euler_curve_residual(0.5, hyperbola_curve(), th))) > 0.1


@pytest.mark.parametrize("alpha", [-3.0, -0.5, 0.5, 2.0, 4.0])
def test_power_cosine_family(alpha):
    c = power_cosine_curve(alpha)
    th = np.linspace(c.lo * 0.9, c.hi * 0.9, 51)
    assert np.max(np.abs(euler_curve_residual(alpha, c, th))) <= 1e-8


def test_literal_reading_is_null_lagrangian():
    th = np.linspace(0.05, math.pi / 4 - 0.05, 21)
    assert np.max(np.abs(euler_residual_literal(0.5, hyperbola_curve(), th))) <= 1e-5


def test_residual_requires_positive_radius():
    bad = PolarCurve(lambda t: t, lambda t: 1.0 + 0 * t, lambda t: 0 * t, -1, 1)
    with pytest.raises(ValueError):
        euler_curve_residual(1.0, bad, -0.5)


def _wobble():
    def r(t):
        return 1 + 0.3 * np.cos(t)

    def dr(t):
        return -0.3 * np.sin(t)

    def d2r(t):
        return -0.3 * np.cos(t)

    return PolarCurve(r, dr, d2r, -1.2, 1.2, "wobble")


@pytest.mark.parametrize("alpha", [2.0, 0.5, -1.0])
def test_residual_formula_against_polyline_oracle(alpha):
    c = _wobble()
    phi = lambda t: np.sin(math.pi * (t + 1.2) / 2.4) ** 2  # noqa: E731
    exact = residual_variation(alpha, c, phi)
    assert abs(exact) > 0.1
    d200 = polyline_variation(alpha, c, phi, 200)
    d2000 = polyline_variation(alpha, c, phi, 2000)
    assert abs(d200 - exact) <= 1e-4 * abs(exact)
    # second-order convergence of the midpoint polyline
    assert abs(d2000 - exact) <= 0.05 * abs(d200 - exact)


# -- CSV -----------------------------------------------------------------------------


def test_csv_round_trip(tmp_path):
    prof = shoot_rotational(-2.0, (0.0, -1.0, 0.0), 0.05, 1e-2)
    path = tmp_path / "p.csv"
    write_csv(path, PROFILE_HEADER, prof.rows())
    rows = list(csv.reader(path.open()))
    assert tuple(rows[0]) == PROFILE_HEADER
    assert [float(x) for x in rows[-1]] == [prof.s[-1], prof.f[-1], prof.z[-1], prof.theta[-1]]
    assert list(tmp_path.iterdir()) == [path]
    assert RESIDUAL_HEADER == ("u", "v", "x", "y", "z", "H", "K", "residual")
