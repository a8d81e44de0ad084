"""Batch coreset construction by greedy furthest-point insertion.

Starting from the two-point seed (farthest from the first point, then
farthest from that), the construction repeatedly pulls in the point farthest
from the current center and re-solves the ball over the selection, until no
remaining point falls outside the (1 + eps)-expansion. The result is a small
subset whose expanded ball covers the whole input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidParameterError
from .geometry import Ball
from .kernels import KernelBall, KernelCenter, KernelSpec, kernel_cross, kernel_diag
from .solver import ITERATION_CAP, _core_meb_euclidean, _fw_gram, _MatrixColumns

__all__ = ["Coreset", "core_meb"]


@dataclass(frozen=True)
class Coreset:
    """A coreset: member points in insertion order, their stream positions,
    and the ball solved over the members."""

    points: np.ndarray
    positions: np.ndarray
    ball: Ball | KernelBall

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def radius(self) -> float:
        return self.ball.radius


def _check_args(n: int, eps: float) -> None:
    if n == 0:
        raise InvalidParameterError("coreset construction needs at least one point")
    if not 0.0 < eps < 1.0:
        raise InvalidParameterError(f"eps must be in (0, 1), got {eps}")


def core_meb(
    points,
    eps: float,
    space: KernelSpec | None = None,
    solver_tol: float | None = None,
) -> Coreset:
    """Build an eps-expansion coreset of a point set.

    On return every input point lies within (1 + eps) times the coreset ball
    radius of its center. ``solver_tol`` overrides the inner re-solve
    tolerance (default eps / 10). ``space`` switches to feature-space balls.
    """
    coreset, _weights = _core_meb_with_weights(points, eps, space, solver_tol)
    return coreset


def _core_meb_with_weights(
    points,
    eps: float,
    space: KernelSpec | None = None,
    solver_tol: float | None = None,
) -> tuple[Coreset, np.ndarray]:
    """core_meb plus the ball weights over the members (internal)."""
    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))
    _check_args(pts.shape[0], eps)
    tol = eps / 10.0 if solver_tol is None else solver_tol
    if space is None:
        sel, cnt, alpha, center, g, _iters, ok = _core_meb_euclidean(
            pts, eps, tol, ITERATION_CAP
        )
        if not ok:
            raise ConvergenceError("inner ball solve hit its iteration cap", residual=np.nan)
        idx = np.array(sel[:cnt])
        ball = Ball(center.copy(), float(np.sqrt(max(g, 0.0))))
        weights = np.maximum(alpha[:cnt].copy(), 0.0)
        weights /= weights.sum()
        return Coreset(pts[idx].copy(), idx, ball), weights
    coreset = _core_meb_kernel(pts, eps, space, tol)
    return coreset, coreset.ball.center.weights


def _core_meb_kernel(pts: np.ndarray, eps: float, spec: KernelSpec, tol: float) -> Coreset:
    n = pts.shape[0]
    diag_all = kernel_diag(spec, pts)

    def d2_from(i: int) -> np.ndarray:
        row = kernel_cross(spec, pts[i : i + 1], pts)[0]
        return diag_all[i] + diag_all - 2.0 * row

    a = int(np.argmax(d2_from(0)))
    b = int(np.argmax(d2_from(a)))
    sel = [a] if b == a else [a, b]

    # Growing Gram over the selection plus cross rows against the full set.
    sel_idx = np.array(sel)
    gram = kernel_cross(spec, pts[sel_idx], pts[sel_idx])
    cross = kernel_cross(spec, pts[sel_idx], pts)
    alpha = np.full(len(sel), 1.0 / len(sel))
    kalpha = np.empty(len(sel))
    g, _it, _rel, ok = _fw_gram(_MatrixColumns(gram), kernel_diag(spec, pts[sel_idx]), alpha, kalpha, tol, ITERATION_CAP)
    if not ok:
        raise ConvergenceError("inner kernel solve hit its iteration cap", residual=np.nan)

    grow_bound = (1.0 + eps) * (1.0 + eps)
    chosen = np.zeros(n, dtype=bool)
    chosen[sel] = True
    while True:
        norm2 = float(alpha @ kalpha)
        d2_all = norm2 + diag_all - 2.0 * (alpha @ cross)
        d2_all[chosen] = -np.inf
        far = int(np.argmax(d2_all))
        if not np.isfinite(d2_all[far]) or d2_all[far] <= grow_bound * g:
            break
        # Extend the selection: one new Gram row/column and cross row.
        new_cross = kernel_cross(spec, pts[far : far + 1], pts)[0]
        new_col = new_cross[np.array(sel)]
        k = len(sel)
        bigger = np.empty((k + 1, k + 1))
        bigger[:k, :k] = gram
        bigger[:k, k] = new_col
        bigger[k, :k] = new_col
        bigger[k, k] = diag_all[far]
        gram = bigger
        cross = np.vstack([cross, new_cross])
        sel.append(far)
        chosen[far] = True
        alpha = np.append(alpha, 0.0)
        kalpha = np.append(kalpha, float(alpha[:k] @ new_col))
        g, _it, _rel, ok = _fw_gram(
            _MatrixColumns(gram), np.diagonal(gram).copy(), alpha, kalpha, tol, ITERATION_CAP
        )
        if not ok:
            raise ConvergenceError("inner kernel solve hit its iteration cap", residual=np.nan)

    idx = np.array(sel)
    np.maximum(alpha, 0.0, out=alpha)
    alpha = alpha / alpha.sum()
    center = KernelCenter(pts[idx].copy(), alpha, float(alpha @ kalpha))
    ball = KernelBall(center, float(np.sqrt(max(g, 0.0))))
    return Coreset(pts[idx].copy(), idx, ball)
