"""Exact minimum enclosing balls at small dimension.

Randomized move-to-front construction with exact circumball solves on the
boundary set. Practical up to m <= 12 and roughly 10^4 points; used as the
reference oracle by tests and by the benchmark error metric.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, UnsupportedDimensionError
from .geometry import Ball

__all__ = ["welzl_exact", "WELZL_DIMENSION_CAP"]

WELZL_DIMENSION_CAP = 12

# Relative slack for "inside" tests during construction; keeps the move-to-front
# recursion stable without inflating the result beyond ~1e-10 relative error.
_REL_EPS = 1e-10


def _circumball(points: np.ndarray, boundary: list[int]) -> tuple[np.ndarray, float]:
    """Smallest ball with every boundary point on its surface.

    Solves for the center inside the affine hull of the boundary set; a
    least-squares solve keeps degenerate (affinely dependent) sets from
    blowing up.
    """
    m = points.shape[1]
    if not boundary:
        return np.zeros(m), 0.0
    base = points[boundary[0]]
    if len(boundary) == 1:
        return base.copy(), 0.0
    rel = points[boundary[1:]] - base
    gram = 2.0 * rel @ rel.T
    rhs = np.einsum("ij,ij->i", rel, rel)
    lam, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    center = base + lam @ rel
    r2 = float(np.max(np.einsum("ij,ij->i", points[boundary] - center, points[boundary] - center)))
    return center, float(np.sqrt(max(r2, 0.0)))


def _mtf_ball(points: np.ndarray, order: list[int], end: int, boundary: list[int]):
    """Move-to-front pass over order[:end] with a fixed boundary set.

    Recursion only deepens when the boundary grows, so the depth is bounded
    by m + 2 regardless of the number of points.
    """
    center, radius = _circumball(points, boundary)
    if len(boundary) == points.shape[1] + 1:
        return center, radius
    i = 0
    while i < end:
        idx = order[i]
        d2 = float(np.sum((points[idx] - center) ** 2))
        if d2 > radius * radius * (1.0 + _REL_EPS) + 1e-30:
            center, radius = _mtf_ball(points, order, i, boundary + [idx])
            order.pop(i)
            order.insert(0, idx)
        i += 1
    return center, radius


def welzl_exact(points, rng_seed: int = 1729) -> Ball:
    """Exact MEB of a point set (up to ~1e-9 relative accuracy).

    Raises UnsupportedDimensionError above the dimension cap. Complexity is
    expected-linear in the number of points but exponential in dimension,
    hence the cap.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.size == 0:
        raise InvalidParameterError("welzl_exact needs at least one point")
    n, m = pts.shape
    if m > WELZL_DIMENSION_CAP:
        raise UnsupportedDimensionError(
            f"exact solver supports dimension <= {WELZL_DIMENSION_CAP}, got {m}"
        )
    order = list(range(n))
    np.random.default_rng(rng_seed).shuffle(order)
    center, radius = _mtf_ball(pts, order, n, [])
    return Ball(center, float(radius))
