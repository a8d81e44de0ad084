import math

import numpy as np
import pytest

from mebstream import KernelSpec, Swmeb, coverage_epsilon, kernel_distances
from mebstream.errors import InvalidParameterError, WarmupError
from mebstream.geometry import containment_slack

SQRT2 = math.sqrt(2.0)


def window_of(pts, t, N):
    return pts[max(0, t - N) : t]


def test_constructor_validation():
    Swmeb(10, 5, 0.1, 0.1)
    with pytest.raises(InvalidParameterError):
        Swmeb(10, 3, 0.1, 0.1)  # partition must divide the window
    with pytest.raises(InvalidParameterError):
        Swmeb(10, 5, 0.0, 0.1)
    with pytest.raises(InvalidParameterError):
        Swmeb(10, 5, 0.1, 1.0)


def test_warmup_query_raises():
    s = Swmeb(4, 2, 0.1, 0.1)
    with pytest.raises(WarmupError):
        s.query()
    s.insert(np.array([0.0]))
    with pytest.raises(WarmupError):
        s.query()  # buffer not sealed yet


def test_collinear_hand_simulation():
    # four collinear points, window 4, partitions of 2
    s = Swmeb(4, 2, eps1=1e-6, eps2=0.1)
    for v in (0.0, 1.0, 2.0, 3.0):
        s.insert(np.array([v]))
    assert len(s._partitions) == 2
    # first index of each partition sits at the partition's far end
    assert [p[0].pos for p in s._partitions] == [2, 4]
    q = s.query()
    assert q.start_index == 1
    assert abs(q.radius - 1.5) <= 1e-6
    pts = np.array([[0.0], [1.0], [2.0], [3.0]])
    bound = (SQRT2 + coverage_epsilon(1e-6, 0.1)) * q.radius + containment_slack(q.radius)
    assert q.distances_to_center(pts).max() <= bound


def test_partition_drop_keeps_count():
    s = Swmeb(4, 2, 0.1, 0.1)
    for v in range(10):
        s.insert(np.array([float(v)]))
        assert len(s._partitions) <= 2
        assert len(s._buffer) < 2
    # steady state: oldest partition dropped at each seal beyond the window
    assert len(s._partitions) == 2


def test_query_start_structural_bounds(rng):
    N, L = 60, 10
    s = Swmeb(N, L, 0.1, 0.2)
    pts = rng.normal(size=(300, 3))
    gap = s.max_index_gap
    for i, p in enumerate(pts):
        s.insert(p)
        t = i + 1
        if t < L:
            continue
        q = s.query()
        assert q.start_index >= t - N + 1
        if t >= N:  # the upper bound is a steady-state property
            assert q.start_index <= t - N + 1 + L + gap


def test_window_coverage_with_derived_constant(rng):
    eps1, eps2 = 0.1, 0.2
    eps_star = coverage_epsilon(eps1, eps2)
    for N, L in ((40, 4), (100, 10)):
        s = Swmeb(N, L, eps1, eps2)
        pts = rng.normal(size=(3 * N, 4)) * rng.uniform(0.5, 2)
        for i, p in enumerate(pts):
            s.insert(p)
            t = i + 1
            if t < L:
                continue
            q = s.query()
            w = window_of(pts, t, N)
            d = q.distances_to_center(w).max()
            assert d <= (SQRT2 + eps_star) * q.radius + containment_slack(q.radius)


def test_triggered_index_radii_ascend(rng):
    # radius-triggered snapshots within a partition grow by (1 + eps2) steps
    eps2 = 0.3
    s = Swmeb(100, 20, 0.05, eps2)
    pts = rng.normal(size=(200, 3))
    for p in pts:
        s.insert(p)
    for part in s._partitions:
        triggered = [e.radius_at_creation for e in part if not e.forced]
        for a, b in zip(triggered, triggered[1:]):
            assert b >= (1 + eps2) * a - 1e-12


def test_forced_indices_respect_density_floor(rng):
    s = Swmeb(100, 20, 0.05, 0.3)
    pts = rng.normal(size=(200, 3))
    for p in pts:
        s.insert(p)
    for part in s._partitions:
        positions = [e.pos for e in part]
        assert positions == sorted(positions, reverse=True)
        for hi, lo in zip(positions, positions[1:]):
            assert hi - lo <= s.max_index_gap


def test_batch_mode_matches_window_semantics(rng):
    N, L, b = 40, 10, 5
    s = Swmeb(N, L, 0.1, 0.2, space=None)
    pts = rng.normal(size=(120, 3))
    eps_star = coverage_epsilon(0.1, 0.2)
    for lo in range(0, 120, b):
        s.insert_batch(pts[lo : lo + b])
        t = lo + b
        if t < L:
            continue
        q = s.query()
        # batch mode snaps index positions to batch starts
        assert (q.start_index - 1) % b == 0
        w = window_of(pts, t, N)
        d = q.distances_to_center(w).max()
        assert d <= (SQRT2 + eps_star) * q.radius + containment_slack(q.radius)


def test_batch_size_must_divide_partition(rng):
    s = Swmeb(40, 10, 0.1, 0.2)
    with pytest.raises(InvalidParameterError):
        s.insert_batch(rng.normal(size=(3, 2)))


def test_kernel_mode_coverage(rng):
    spec = KernelSpec("gaussian", gamma=8.0)
    eps1, eps2 = 0.1, 0.2
    eps_star = coverage_epsilon(eps1, eps2)
    N, L = 40, 8
    s = Swmeb(N, L, eps1, eps2, space=spec)
    pts = rng.normal(size=(100, 4))
    for i, p in enumerate(pts):
        s.insert(p)
        t = i + 1
        if t < L:
            continue
        q = s.query()
        kb = q.ball
        w = window_of(pts, t, N)
        d = kernel_distances(kb.center, w, spec).max()
        assert d <= (SQRT2 + eps_star) * kb.radius + containment_slack(kb.radius)


def test_stored_points_accounting(rng):
    s = Swmeb(40, 10, 0.1, 0.2)
    pts = rng.normal(size=(100, 3))
    for p in pts:
        s.insert(p)
    expected = len(s._buffer) + sum(e.inst.size for part in s._partitions for e in part)
    assert s.stored_points() == expected
    assert s.index_count() == sum(len(p) for p in s._partitions)
