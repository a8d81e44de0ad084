"""Single-ball streaming baseline (1.5-approximate, no coreset).

When a point lands outside the current ball, the ball is enlarged to the
smallest one containing both the old ball and the point: the new diameter
spans from the far side of the old ball to the new point. The maintained
radius therefore sandwiches the true one: r* <= r <= 1.5 r*. In kernel mode
the center is carried as a convex combination of seen points and the same
chord construction runs in feature space.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError
from .geometry import Ball
from .kernels import (
    KernelBall,
    KernelCenter,
    KernelSpec,
    kernel_cross,
    kernel_diag,
)

__all__ = ["Ssmeb"]


class Ssmeb:
    """Streaming approximate ball: containment by construction, radius within
    1.5 of optimal. Single writer per instance."""

    def __init__(self, first_point, space: KernelSpec | None = None):
        p = np.asarray(first_point, dtype=np.float64)
        if p.ndim != 1:
            raise InvalidParameterError("first point must be a 1-D coordinate vector")
        self.space = space
        self.radius = 0.0
        self.points_seen = 1
        if space is None:
            self._center = p.copy()
        else:
            self._support = [p.copy()]
            self._weights = [1.0]
            self._norm2 = float(kernel_diag(space, p[None, :])[0])

    # -- updates ---------------------------------------------------------

    def update(self, point) -> bool:
        """Process one point; True if the ball grew."""
        p = np.asarray(point, dtype=np.float64)
        self.points_seen += 1
        if self.space is None:
            return self._update_euclidean(p)
        return self._update_kernel(p)

    def update_batch(self, batch) -> int:
        """Process points in order (the update is inherently sequential)."""
        rows = np.atleast_2d(np.asarray(batch, dtype=np.float64))
        grew = 0
        for row in rows:
            grew += self.update(row)
        return grew

    def _update_euclidean(self, p: np.ndarray) -> bool:
        diff = p - self._center
        d = float(np.sqrt(diff @ diff))
        if d <= self.radius:
            return False
        new_r = 0.5 * (self.radius + d)
        self._center = self._center + (1.0 - new_r / d) * diff
        self.radius = new_r
        return True

    def _update_kernel(self, p: np.ndarray) -> bool:
        sup = np.vstack(self._support)
        w = np.asarray(self._weights)
        row = kernel_cross(self.space, sup, p[None, :])[:, 0]
        kpp = float(kernel_diag(self.space, p[None, :])[0])
        d2 = self._norm2 + kpp - 2.0 * float(w @ row)
        d = float(np.sqrt(max(d2, 0.0)))
        if d <= self.radius:
            return False
        new_r = 0.5 * (self.radius + d)
        t = 1.0 - new_r / d  # weight moved onto the new point along the chord
        keep = 1.0 - t
        self._weights = [wi * keep for wi in self._weights]
        self._weights.append(t)
        self._support.append(p.copy())
        self._norm2 = keep * keep * self._norm2 + 2.0 * keep * t * float(w @ row) + t * t * kpp
        self.radius = new_r
        return True

    # -- accessors -------------------------------------------------------

    @property
    def center(self):
        if self.space is None:
            return self._center.copy()
        return KernelCenter(np.vstack(self._support), np.asarray(self._weights), self._norm2)

    @property
    def ball(self) -> Ball | KernelBall:
        if self.space is None:
            return Ball(self._center.copy(), self.radius)
        return KernelBall(self.center, self.radius)
