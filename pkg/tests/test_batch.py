import math

import numpy as np
import pytest

from mebstream import (
    KernelSpec,
    core_meb,
    coreset_error,
    exact_window_radius,
    kernel_distances,
    two_point_ball,
    welzl_exact,
)
from mebstream.errors import InvalidParameterError


def test_two_distinct_points():
    pts = np.array([[0.0, 0.0], [2.0, 0.0]])
    cs = core_meb(pts, 1e-3)
    assert cs.size == 2
    assert sorted(cs.positions.tolist()) == [0, 1]
    ref = two_point_ball(pts[0], pts[1])
    assert np.allclose(cs.ball.center, ref.center)
    assert abs(cs.ball.radius - ref.radius) <= 1e-12


def test_single_point():
    cs = core_meb(np.array([[5.0, 5.0]]), 0.5)
    assert cs.size == 1
    assert cs.ball.radius == 0.0


def test_equilateral_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    cs = core_meb(pts, 1e-3)
    assert cs.size == 3
    assert abs(cs.ball.radius - 1 / math.sqrt(3)) <= 1e-3


def test_coverage_and_error_against_oracle(rng):
    eps = 1e-3
    for _ in range(20):
        pts = rng.normal(size=(500, 10))
        cs = core_meb(pts, eps)
        d = np.sqrt(np.sum((pts - cs.ball.center) ** 2, axis=1))
        # every input point in the (1 + eps)-expansion, asserted exactly
        assert d.max() <= (1 + eps) * cs.ball.radius + 1e-12 * max(1, cs.ball.radius)
        err = coreset_error(pts, cs.ball, exact_window_radius(pts))
        assert -1e-9 <= err <= eps + 1e-9


def test_members_are_input_rows(rng):
    pts = rng.normal(size=(200, 4))
    cs = core_meb(pts, 0.01)
    assert np.array_equal(cs.points, pts[cs.positions])
    assert len(set(cs.positions.tolist())) == cs.size


def test_coincident_duplicates_kept(rng):
    # duplicated rows count as distinct stream members
    p = rng.normal(size=4)
    pts = np.vstack([p, p, p + [10, 0, 0, 0]])
    cs = core_meb(pts, 0.5)
    assert cs.size >= 2


def test_eps_validation(rng):
    pts = rng.normal(size=(5, 2))
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(InvalidParameterError):
            core_meb(pts, bad)
    with pytest.raises(InvalidParameterError):
        core_meb(np.empty((0, 2)), 0.1)


def test_kernel_mode_coverage(rng):
    spec = KernelSpec("gaussian", gamma=6.0)
    pts = rng.normal(size=(300, 5))
    eps = 1e-2
    cs = core_meb(pts, eps, space=spec)
    d = kernel_distances(cs.ball.center, pts, spec)
    assert d.max() <= (1 + eps) * cs.ball.radius + 1e-12
    assert np.array_equal(cs.points, pts[cs.positions])


def test_kernel_linear_matches_euclidean(rng):
    # the two construction routes may pick different members, so radii agree
    # only at the eps scale; both stay below the exact radius
    eps = 1e-3
    pts = rng.normal(size=(150, 3))
    cs_e = core_meb(pts, eps)
    cs_k = core_meb(pts, eps, space=KernelSpec("linear"))
    r_star = welzl_exact(pts).radius
    assert abs(cs_e.ball.radius - cs_k.ball.radius) <= 2 * eps * r_star
    assert cs_e.ball.radius <= r_star * (1 + 1e-9)
    assert cs_k.ball.radius <= r_star * (1 + 1e-9)
