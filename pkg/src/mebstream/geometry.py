"""Dense points, Euclidean distance, and ball primitives.

Points are plain 1-D float64 numpy arrays of a fixed dimension m. Balls are
immutable (center, radius) pairs. Containment tests carry a small tolerance
so boundary points do not oscillate in and out under floating-point drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError

__all__ = [
    "Ball",
    "as_point",
    "containment_slack",
    "contains_expanded",
    "distance",
    "two_point_ball",
]


def as_point(coords) -> np.ndarray:
    """Validate and convert a coordinate sequence into a point array."""
    p = np.asarray(coords, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameterError("a point must be a nonempty 1-D coordinate vector")
    if not np.all(np.isfinite(p)):
        raise InvalidParameterError("point coordinates must be finite")
    return p


def _check_same_dim(p: np.ndarray, q: np.ndarray) -> None:
    if p.shape[-1] != q.shape[-1]:
        raise DimensionMismatchError(
            f"dimension mismatch: {p.shape[-1]} vs {q.shape[-1]}"
        )


def distance(p, q) -> float:
    """Euclidean distance between two points of equal dimension."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    _check_same_dim(p, q)
    return float(np.sqrt(np.sum((p - q) ** 2)))


def containment_slack(radius: float) -> float:
    """Absolute tolerance used by every ball containment test."""
    return 1e-12 * max(1.0, radius)


@dataclass(frozen=True)
class Ball:
    """A closed ball with an explicit Euclidean center.

    The arrays handed in are not copied; treat a Ball as read-only.
    """

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise InvalidParameterError(f"radius must be nonnegative, got {self.radius}")

    @property
    def dim(self) -> int:
        return int(self.center.shape[0])

    def distance_to(self, p) -> float:
        return distance(self.center, p)


def two_point_ball(p, q) -> Ball:
    """Smallest ball through two points: midpoint center, half-distance radius."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    _check_same_dim(p, q)
    center = 0.5 * (p + q)
    return Ball(center, 0.5 * float(np.sqrt(np.sum((p - q) ** 2))))


def contains_expanded(ball: Ball, p, mu: float = 1.0) -> bool:
    """True if p lies in the mu-expansion of the ball (same center, mu * radius).

    mu must be at least 1. The test allows ``containment_slack(radius)`` of
    boundary drift.
    """
    if mu < 1.0:
        raise InvalidParameterError(f"expansion factor must be >= 1, got {mu}")
    d = distance(ball.center, p)
    return d <= mu * ball.radius + containment_slack(ball.radius)
