"""Quality metrics for window coresets.

The relative error of a coreset against a window is measured through the
smallest expansion factor that makes the coreset ball cover the window:
``err = (max_dist_to_center - exact_radius) / exact_radius``, where the
numerator's first term equals the minimal covering expansion times the
coreset radius. A plain approximate ball (no coreset) is scored by its
radius against the exact one.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateWindowError, InvalidParameterError
from .exact import WELZL_DIMENSION_CAP, welzl_exact
from .geometry import Ball
from .kernels import KernelBall, KernelSpec, kernel_distances
from .solver import solve_kernel_meb, solve_meb

__all__ = [
    "max_center_distance",
    "coreset_error",
    "ball_error",
    "exact_window_radius",
    "EXACT_SOLVE_TOL",
]

# Reference solves emulate an exact answer at this relative duality gap.
EXACT_SOLVE_TOL = 1e-9


def max_center_distance(ball: Ball | KernelBall, points, space: KernelSpec | None = None) -> float:
    """Largest distance from the ball's center to any of the points."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if isinstance(ball, KernelBall):
        if space is None:
            raise InvalidParameterError("kernel ball needs its kernel spec")
        return float(np.max(kernel_distances(ball.center, pts, space)))
    diff = pts - ball.center
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", diff, diff))))


def coreset_error(
    window,
    coreset_ball: Ball | KernelBall,
    exact_radius: float,
    space: KernelSpec | None = None,
) -> float:
    """Relative error of a coreset ball against a window's exact radius."""
    if not exact_radius > 0.0:
        raise DegenerateWindowError("window has zero exact radius")
    covering = max_center_distance(coreset_ball, window, space)
    return (covering - exact_radius) / exact_radius


def ball_error(ball_radius: float, exact_radius: float) -> float:
    """Relative radius error of an approximate ball (no coreset semantics)."""
    if not exact_radius > 0.0:
        raise DegenerateWindowError("window has zero exact radius")
    return (ball_radius - exact_radius) / exact_radius


def exact_window_radius(window, space: KernelSpec | None = None) -> float:
    """Reference radius of a window's ball.

    Euclidean windows at dimension <= 12 use the exact combinatorial solver;
    higher dimensions and kernel spaces use a high-precision dual solve whose
    radius is within 1e-9 (relative) below the true value.
    """
    pts = np.atleast_2d(np.asarray(window, dtype=np.float64))
    if pts.shape[0] == 0:
        raise InvalidParameterError("window must be nonempty")
    if space is None:
        if pts.shape[1] <= WELZL_DIMENSION_CAP:
            return welzl_exact(pts).radius
        return solve_meb(pts, EXACT_SOLVE_TOL).ball.radius
    _, radius = solve_kernel_meb(pts, space, EXACT_SOLVE_TOL)
    return radius
