"""Kernel functions and implicit feature-space ball centers.

A feature-space center is never materialized: it is carried as a convex
combination of support points, and all distances are evaluated through the
kernel. The linear kernel reproduces plain Euclidean geometry, which gives
every feature-space operation an explicit cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateKernelError,
    DimensionMismatchError,
    InvalidParameterError,
    NumericsError,
)

__all__ = [
    "KernelSpec",
    "KernelCenter",
    "KernelBall",
    "kernel_eval",
    "kernel_cross",
    "kernel_diag",
    "estimate_gamma",
    "kernel_distance",
    "kernel_distances",
    "kernel_radius",
]

_KINDS = ("linear", "gaussian")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice: ``linear`` (dot product) or ``gaussian`` with width gamma.

    gamma is in squared-distance units; required and positive for gaussian.
    """

    kind: str = "linear"
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParameterError(f"kernel kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "gaussian":
            if self.gamma is None or not self.gamma > 0:
                raise InvalidParameterError("gaussian kernel needs gamma > 0")


def kernel_eval(spec: KernelSpec, p, q) -> float:
    """k(p, q) for a single pair."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"dimension mismatch: {p.shape} vs {q.shape}")
    if spec.kind == "linear":
        return float(p @ q)
    d2 = float(np.sum((p - q) ** 2))
    return float(np.exp(-d2 / spec.gamma))


def kernel_cross(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kernel matrix k(a_i, b_j) for two stacks of points, shape (len(a), len(b))."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    if spec.kind == "linear":
        return a @ b.T
    d2 = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-d2 / spec.gamma)


def kernel_diag(spec: KernelSpec, a: np.ndarray) -> np.ndarray:
    """Vector of k(a_i, a_i)."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if spec.kind == "linear":
        return np.sum(a * a, axis=1)
    return np.ones(a.shape[0])


def estimate_gamma(sample, max_sample: int = 10_000, seed: int = 0) -> float:
    """Mean squared pairwise distance over a sample, 1/n^2 normalized.

    The self-pairs (zero distance) are included in the average. Samples larger
    than ``max_sample`` are subsampled without replacement using ``seed``.
    Raises DegenerateKernelError when no two sample points differ.
    """
    pts = np.atleast_2d(np.asarray(sample, dtype=np.float64))
    n = pts.shape[0]
    if n < 2:
        raise InvalidParameterError("gamma estimation needs at least two points")
    if n > max_sample:
        keep = np.random.default_rng(seed).choice(n, size=max_sample, replace=False)
        pts = pts[keep]
        n = max_sample
    norms = np.sum(pts * pts, axis=1)
    total = 2.0 * n * float(np.sum(norms)) - 2.0 * float(np.sum(pts, axis=0) @ np.sum(pts, axis=0))
    gamma = max(total, 0.0) / (n * n)
    if gamma <= 0.0:
        raise DegenerateKernelError("all sampled points coincide; kernel width would be 0")
    return gamma


# Threshold below which a "squared length" is treated as a solver bug rather
# than round-off; values in (-threshold, 0) are silently clamped to 0.
_NEG_TOL = 1e-8


def _clamped_sqrt(value: float, scale: float) -> float:
    if value < -_NEG_TOL * max(1.0, scale):
        raise NumericsError(f"squared length {value} is far below zero")
    return float(np.sqrt(max(value, 0.0)))


@dataclass(frozen=True)
class KernelCenter:
    """Implicit feature-space center: support points and convex weights.

    ``norm2`` caches the squared kernel norm of the center (w' K w over the
    support) so distance queries cost one kernel row, not a Gram matrix.
    """

    support: np.ndarray
    weights: np.ndarray
    norm2: float = field(default=-1.0)

    def __post_init__(self):
        sup = np.atleast_2d(np.asarray(self.support, dtype=np.float64))
        w = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "weights", w)
        if sup.shape[0] != w.shape[0]:
            raise InvalidParameterError("support and weights must align")
        if np.any(w < -1e-12) or abs(float(np.sum(w)) - 1.0) > 1e-9:
            raise InvalidParameterError("weights must be nonnegative and sum to 1")

    @classmethod
    def from_weights(cls, support, weights, spec: KernelSpec) -> "KernelCenter":
        sup = np.atleast_2d(np.asarray(support, dtype=np.float64))
        w = np.asarray(weights, dtype=np.float64)
        norm2 = float(w @ kernel_cross(spec, sup, sup) @ w)
        return cls(sup, w, norm2)

    @property
    def size(self) -> int:
        return int(self.support.shape[0])


@dataclass(frozen=True)
class KernelBall:
    """A feature-space ball: implicit center plus radius."""

    center: KernelCenter
    radius: float


def kernel_distances(center: KernelCenter, queries, spec: KernelSpec) -> np.ndarray:
    """Feature-space distances from the center to each query point."""
    q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    cross = kernel_cross(spec, center.support, q)
    d2 = center.norm2 + kernel_diag(spec, q) - 2.0 * (center.weights @ cross)
    scale = max(center.norm2, 1.0)
    if np.any(d2 < -_NEG_TOL * scale):
        raise NumericsError("squared kernel distance far below zero")
    return np.sqrt(np.maximum(d2, 0.0))


def kernel_distance(center: KernelCenter, q, spec: KernelSpec) -> float:
    """Feature-space distance from the center to a single point."""
    return float(kernel_distances(center, np.asarray(q, dtype=np.float64)[None, :], spec)[0])


def kernel_radius(center: KernelCenter, spec: KernelSpec) -> float:
    """Ball radius implied by the center weights: sqrt(w'diag(K) - w'Kw)."""
    diag_term = float(center.weights @ kernel_diag(spec, center.support))
    return _clamped_sqrt(diag_term - center.norm2, max(diag_term, 1.0))
