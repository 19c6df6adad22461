"""Floating-point checks of stationarity for the energy integral of |Phi|^alpha."""

from .euler import (
    CURVES,
    PolarCurve,
    euler_curve_residual,
    euler_residual_literal,
    hyperbola_curve,
    line_curve,
    polyline_variation,
    power_cosine_curve,
    residual_variation,
    sec3_curve,
)
from .io import write_csv, write_text_atomic
from .shooting import ProfileCurve, ShootingError, profile_deviation, shoot_rotational
from .stationarity import (
    ResidualGrid,
    SingularPointError,
    energy,
    first_variation,
    random_smooth_field,
    residual_grid,
    stationarity_residual,
    variation_integral,
)
from .surfaces import (
    DegenerateChartError,
    FrameSample,
    SurfaceSpec,
    analytic,
    cylinder,
    plane,
    rotational,
    sphere,
    surface_frame,
)

__all__ = [
    "SurfaceSpec", "FrameSample", "DegenerateChartError",
    "plane", "sphere", "cylinder", "rotational", "analytic", "surface_frame",
    "stationarity_residual", "residual_grid", "ResidualGrid", "SingularPointError",
    "energy", "first_variation", "variation_integral", "random_smooth_field",
    "ProfileCurve", "ShootingError", "shoot_rotational", "profile_deviation",
    "PolarCurve", "euler_curve_residual", "euler_residual_literal", "polyline_variation",
    "residual_variation", "sec3_curve", "hyperbola_curve", "power_cosine_curve", "line_curve", "CURVES",
    "write_csv", "write_text_atomic",
]
