import math

import numpy as np
import pytest

from mebstream import (
    KernelCenter,
    KernelSpec,
    distance,
    estimate_gamma,
    gen_synthetic,
    kernel_distance,
    kernel_eval,
    kernel_radius,
    solve_kernel_meb,
    solve_meb,
    welzl_exact,
)
from mebstream.errors import DegenerateKernelError, InvalidParameterError
from mebstream.kernels import kernel_cross


def test_kernel_eval_examples():
    spec = KernelSpec("gaussian", gamma=4.0)
    p = np.array([0.0, 0.0])
    assert kernel_eval(spec, p, p) == 1.0
    q = np.array([2.0, 0.0])  # d^2 == gamma
    assert abs(kernel_eval(spec, p, q) - math.exp(-1)) <= 1e-12
    lin = KernelSpec("linear")
    assert kernel_eval(lin, [1.0, 2.0], [3.0, 4.0]) == 11.0


def test_kernel_eval_symmetry(rng):
    spec = KernelSpec("gaussian", gamma=3.0)
    for _ in range(20):
        p, q = rng.normal(size=(2, 6))
        assert kernel_eval(spec, p, q) == kernel_eval(spec, q, p)


def test_spec_validation():
    with pytest.raises(InvalidParameterError):
        KernelSpec("gaussian")
    with pytest.raises(InvalidParameterError):
        KernelSpec("gaussian", gamma=0.0)
    with pytest.raises(InvalidParameterError):
        KernelSpec("poly")


def test_estimate_gamma_two_points():
    pts = np.array([[0.0], [2.0]])
    assert abs(estimate_gamma(pts) - 2.0) <= 1e-12  # (0+4+4+0)/4


def test_estimate_gamma_synthetic_scale():
    pts = gen_synthetic(10_000, 50, seed=11)
    gamma = estimate_gamma(pts)
    assert abs(gamma - 100.0) <= 10.0  # about twice the dimension


def test_estimate_gamma_degenerate():
    pts = np.tile([1.0, 2.0], (5, 1))
    with pytest.raises(DegenerateKernelError):
        estimate_gamma(pts)


def test_estimate_gamma_sampling_deterministic(rng):
    pts = rng.normal(size=(20_000, 3))
    a = estimate_gamma(pts, max_sample=1000, seed=5)
    b = estimate_gamma(pts, max_sample=1000, seed=5)
    assert a == b


def test_kernel_distance_examples(rng):
    spec = KernelSpec("gaussian", gamma=2.0)
    p = rng.normal(size=4)
    center = KernelCenter.from_weights(p[None, :], [1.0], spec)
    assert kernel_distance(center, p, spec) <= 1e-12
    q = rng.normal(size=4)
    k = kernel_eval(spec, p, q)
    assert abs(kernel_distance(center, q, spec) - math.sqrt(2 - 2 * k)) <= 1e-12


def test_kernel_radius_examples(rng):
    spec = KernelSpec("gaussian", gamma=2.0)
    p = rng.normal(size=3)
    single = KernelCenter.from_weights(p[None, :], [1.0], spec)
    assert kernel_radius(single, spec) == 0.0
    q = rng.normal(size=3)
    k = kernel_eval(spec, p, q)
    pair = KernelCenter.from_weights(np.vstack([p, q]), [0.5, 0.5], spec)
    assert abs(kernel_radius(pair, spec) - math.sqrt((1 - k) / 2)) <= 1e-12


def test_linear_kernel_matches_euclidean_ops(rng):
    # explicit feature map: linear-kernel geometry is plain geometry on the
    # weighted combination of the support
    lin = KernelSpec("linear")
    for _ in range(100):
        n, m = int(rng.integers(2, 10)), int(rng.integers(1, 6))
        sup = rng.normal(size=(n, m))
        w = rng.uniform(0, 1, size=n)
        w /= w.sum()
        center = KernelCenter.from_weights(sup, w, lin)
        q = rng.normal(size=m)
        assert abs(kernel_distance(center, q, lin) - distance(w @ sup, q)) <= 1e-10


def test_psd_radius_nonnegative(rng):
    for spec in (KernelSpec("linear"), KernelSpec("gaussian", gamma=1.5)):
        for _ in range(50):
            sup = rng.normal(size=(6, 3))
            w = rng.dirichlet(np.ones(6))
            gram = kernel_cross(spec, sup, sup)
            value = float(w @ np.diag(gram)) - float(w @ gram @ w)
            assert value >= -1e-10


def test_solve_kernel_single_point():
    spec = KernelSpec("gaussian", gamma=1.0)
    center, r = solve_kernel_meb([[1.0, 2.0]], spec, 1e-9)
    assert r == 0.0
    assert center.weights.tolist() == [1.0]


def test_solve_kernel_two_points(rng):
    spec = KernelSpec("gaussian", gamma=5.0)
    p, q = rng.normal(size=(2, 4))
    center, r = solve_kernel_meb(np.vstack([p, q]), spec, 1e-9)
    k = kernel_eval(spec, p, q)
    assert abs(r - math.sqrt((1 - k) / 2)) <= 1e-9
    assert np.allclose(center.weights, [0.5, 0.5], atol=1e-9)


def test_solve_kernel_linear_matches_exact(rng):
    lin = KernelSpec("linear")
    for _ in range(20):
        pts = rng.normal(size=(50, 4))
        _, r = solve_kernel_meb(pts, lin, 1e-9)
        assert abs(r - welzl_exact(pts).radius) <= 1e-6


def test_kernel_coverage_postcondition(rng):
    spec = KernelSpec("gaussian", gamma=8.0)
    pts = rng.normal(size=(120, 5))
    center, r = solve_kernel_meb(pts, spec, 1e-6)
    from mebstream import kernel_distances

    d = kernel_distances(center, pts, spec)
    assert d.max() <= (1 + 1e-6) * r + 1e-12


def test_linear_kernel_solve_matches_euclidean_solver(rng):
    lin = KernelSpec("linear")
    pts = rng.normal(size=(80, 16))
    _, rk = solve_kernel_meb(pts, lin, 1e-9)
    re = solve_meb(pts, 1e-9).ball.radius
    assert abs(rk - re) <= 1e-8 * max(1.0, re)
