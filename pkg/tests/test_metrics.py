import numpy as np
import pytest

from mebstream import (
    Ball,
    KernelSpec,
    ball_error,
    core_meb,
    coreset_error,
    exact_window_radius,
    max_center_distance,
    solve_kernel_meb,
    solve_meb,
    welzl_exact,
)
from mebstream.errors import DegenerateWindowError, InvalidParameterError
from mebstream.kernels import KernelBall


def test_zero_error_when_ball_is_exact(rng):
    pts = rng.normal(size=(50, 3))
    exact = welzl_exact(pts)
    err = coreset_error(pts, exact, exact.radius)
    assert abs(err) <= 1e-9


def test_error_is_zero_for_shrunk_radius_same_center(rng):
    # the covering expansion compensates a mis-stated radius exactly
    pts = rng.normal(size=(50, 3))
    exact = welzl_exact(pts)
    shrunk = Ball(exact.center, 0.9 * exact.radius)
    err = coreset_error(pts, shrunk, exact.radius)
    assert abs(err) <= 1e-9


def test_error_against_batch_coreset(rng):
    eps = 1e-3
    pts = rng.normal(size=(400, 5))
    cs = core_meb(pts, eps)
    err = coreset_error(pts, cs.ball, exact_window_radius(pts))
    assert -1e-9 <= err <= eps + 1e-9


def test_degenerate_window_raises():
    pts = np.zeros((5, 2))
    with pytest.raises(DegenerateWindowError):
        coreset_error(pts, Ball(np.zeros(2), 0.0), 0.0)
    with pytest.raises(DegenerateWindowError):
        ball_error(1.0, 0.0)


def test_ball_error_form():
    assert abs(ball_error(1.2, 1.0) - 0.2) <= 1e-15


def test_exact_window_radius_dispatch(rng):
    # small dimension: combinatorial solver
    pts = rng.normal(size=(200, 5))
    assert abs(exact_window_radius(pts) - welzl_exact(pts).radius) <= 1e-9
    # large dimension: high-precision dual solve
    big = rng.normal(size=(100, 20))
    assert abs(exact_window_radius(big) - solve_meb(big, 1e-9).ball.radius) <= 1e-12
    # kernel space: dual solve through the kernel
    spec = KernelSpec("gaussian", gamma=4.0)
    small = rng.normal(size=(40, 3))
    _, rk = solve_kernel_meb(small, spec, 1e-9)
    assert abs(exact_window_radius(small, spec) - rk) <= 1e-12
    with pytest.raises(InvalidParameterError):
        exact_window_radius(np.empty((0, 3)))


def test_max_center_distance_kernel_needs_spec(rng):
    spec = KernelSpec("gaussian", gamma=2.0)
    pts = rng.normal(size=(10, 2))
    center, r = solve_kernel_meb(pts, spec, 1e-6)
    kb = KernelBall(center, r)
    assert max_center_distance(kb, pts, spec) <= (1 + 1e-6) * r + 1e-12
    with pytest.raises(InvalidParameterError):
        max_center_distance(kb, pts)
