"""Ball solvers built on away-step Frank-Wolfe over the unit simplex.

The minimum enclosing ball is solved in dual form: maximize
``g(a) = sum_i a_i k(p_i, p_i) - a' K a`` over the simplex, where K is the
(possibly implicit) Gram matrix. The center is the weighted combination of
the input points and ``sqrt(g)`` is the radius estimate, which approaches the
true radius from below. Iterations stop once both the toward-vertex gap and
the away-vertex gap fall under ``tolerance * g``, which certifies

* every input point within ``sqrt(1 + tolerance)`` of the radius, and
* every support point no deeper than ``sqrt(1 - tolerance)`` of the radius.

Both facts are what the streaming layers lean on, so the dual stopping rule
is not optional. Exact line search plus away steps give fast (in practice
linear) convergence, making 1e-9 gaps affordable for reference solves.

The Euclidean path keeps an explicit center and is compiled with numba; the
kernel path works off Gram columns, materialized for small sets and computed
lazily for large ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError, InvalidParameterError
from .geometry import Ball
from .kernels import KernelCenter, KernelSpec, kernel_cross, kernel_diag

__all__ = [
    "SolveReport",
    "solve_meb",
    "solve_kernel_meb",
    "resolve_tolerance",
    "ITERATION_CAP",
]

# Hard per-solve cap; exceeding it raises instead of silently truncating.
ITERATION_CAP = 1_000_000

# Inner loops refresh derived state from the weights this often to cancel
# incremental floating-point drift.
_REFRESH_EVERY = 256


def resolve_tolerance(eps: float) -> float:
    """Duality-gap tolerance for re-solves inside streaming structures.

    Must be well below eps**2 so that maintained (approximate) radii still
    satisfy the per-growth lower bound of the append-only structure; eps/10
    is not tight enough for that, eps**2/200 is, with margin.
    """
    return max(eps * eps / 200.0, 1e-12)


@njit(cache=True)
def _face_solve_euclidean(pts, sqnorms, alpha, center, g):  # pragma: no cover - jitted
    """Equality-KKT solve on the current support face, with negative-weight
    drops; accepted only when it improves the dual value. Mutates alpha and
    center on acceptance and returns the (possibly unchanged) dual value.

    When the working support exceeds m + 1 vertices, only the m + 1 heaviest
    are considered (any simplex point that improves the dual is admissible).
    The relative system is built once; drops subset it instead of rebuilding.
    """
    n, m = pts.shape
    cnt = 0
    for i in range(n):
        if alpha[i] > 0.0:
            cnt += 1
    if cnt < 2:
        return g
    limit = m + 1
    if cnt <= limit:
        idx = np.empty(cnt, np.int64)
        k = 0
        for i in range(n):
            if alpha[i] > 0.0:
                idx[k] = i
                k += 1
    else:
        # top-(m + 1) support members by weight
        order = np.argsort(alpha)
        idx = order[n - limit :].copy()
        cnt = limit
    # base: heaviest member (least likely to leave the optimal face)
    base_j = 0
    best_w = -1.0
    for j in range(cnt):
        if alpha[idx[j]] > best_w:
            best_w = alpha[idx[j]]
            base_j = j
    tmp = idx[0]
    idx[0] = idx[base_j]
    idx[base_j] = tmp

    size0 = cnt - 1
    rel = np.empty((size0, m))
    for rebuild in range(2):
        pb = pts[idx[0]]
        for a in range(size0):
            pa = pts[idx[a + 1]]
            for t in range(m):
                rel[a, t] = pa[t] - pb[t]
        mat0 = 2.0 * np.dot(rel, rel.T)
        rhs0 = np.empty(size0)
        for a in range(size0):
            rhs0[a] = 0.5 * mat0[a, a]
        alive = np.ones(size0, np.bool_)
        n_alive = size0
        base_dropped = False
        while n_alive >= 1:
            rows = np.empty(n_alive, np.int64)
            r = 0
            for a in range(size0):
                if alive[a]:
                    rows[r] = a
                    r += 1
            mat = np.empty((n_alive, n_alive))
            rhs = np.empty(n_alive)
            for a in range(n_alive):
                rhs[a] = rhs0[rows[a]]
                for b in range(n_alive):
                    mat[a, b] = mat0[rows[a], rows[b]]
            lam = np.linalg.lstsq(mat, rhs, rcond=1e-12)[0]
            wsum = 0.0
            worst = -1
            worst_val = -1e-12
            for a in range(n_alive):
                wsum += lam[a]
                if lam[a] < worst_val:
                    worst_val = lam[a]
                    worst = a
            w_base = 1.0 - wsum
            if w_base < worst_val:
                base_dropped = True
                break
            if worst >= 0:
                alive[rows[worst]] = False
                n_alive -= 1
                continue
            cand_c = np.zeros(m)
            cand_q = w_base * sqnorms[idx[0]]
            for t in range(m):
                cand_c[t] = w_base * pb[t]
            for a in range(n_alive):
                wa = lam[a]
                if wa < 0.0:
                    wa = 0.0
                pa = pts[idx[rows[a] + 1]]
                for t in range(m):
                    cand_c[t] += wa * pa[t]
                cand_q += wa * sqnorms[idx[rows[a] + 1]]
            cc = 0.0
            for t in range(m):
                cc += cand_c[t] * cand_c[t]
            g_new = cand_q - cc
            if not (g_new >= g and np.isfinite(g_new)):
                return g
            for i in range(n):
                alpha[i] = 0.0
            alpha[idx[0]] = w_base
            for a in range(n_alive):
                wa = lam[a]
                if wa < 0.0:
                    wa = 0.0
                alpha[idx[rows[a] + 1]] = wa
            for t in range(m):
                center[t] = cand_c[t]
            return g_new
        if not base_dropped or rebuild == 1:
            return g
        # retry once with the second-heaviest member as base
        best_w = -1.0
        swap_j = -1
        for j in range(1, cnt):
            if alpha[idx[j]] > best_w:
                best_w = alpha[idx[j]]
                swap_j = j
        if swap_j < 0:
            return g
        tmp = idx[0]
        idx[0] = idx[swap_j]
        idx[swap_j] = tmp
    return g


@njit(cache=True)
def _fw_euclidean(pts, sqnorms, alpha, center, tol, cap):  # pragma: no cover - jitted
    """Away-step Frank-Wolfe with explicit center; mutates alpha and center.

    Every 64 iterations the current support face is solved exactly, which
    collapses the tail of the convergence to a couple of steps in the common
    case while the gap certificates stay the sole exit condition.
    Returns (g, iterations, relative_gap, converged).
    """
    n, m = pts.shape
    it = 0
    refresh = 0
    while True:
        if refresh == 0:
            for j in range(m):
                center[j] = 0.0
            for i in range(n):
                ai = alpha[i]
                if ai != 0.0:
                    for j in range(m):
                        center[j] += ai * pts[i, j]
            refresh = _REFRESH_EVERY
        refresh -= 1

        cc = 0.0
        for j in range(m):
            cc += center[j] * center[j]
        g = -cc
        for i in range(n):
            g += alpha[i] * sqnorms[i]
        if g < 0.0:
            g = 0.0

        best_i = 0
        best_d2 = -1.0
        away_i = -1
        away_d2 = np.inf
        if n >= 64:
            dots = np.dot(pts, center)
            for i in range(n):
                d2 = sqnorms[i] - 2.0 * dots[i] + cc
                if d2 < 0.0:
                    d2 = 0.0
                if d2 > best_d2:
                    best_d2 = d2
                    best_i = i
                if alpha[i] > 0.0 and d2 < away_d2:
                    away_d2 = d2
                    away_i = i
        else:
            for i in range(n):
                dot = 0.0
                for j in range(m):
                    dot += pts[i, j] * center[j]
                d2 = sqnorms[i] - 2.0 * dot + cc
                if d2 < 0.0:
                    d2 = 0.0
                if d2 > best_d2:
                    best_d2 = d2
                    best_i = i
                if alpha[i] > 0.0 and d2 < away_d2:
                    away_d2 = d2
                    away_i = i

        fw_gap = best_d2 - g
        aw_gap = g - away_d2
        thresh = tol * g + 1e-30
        if fw_gap <= thresh and aw_gap <= thresh:
            rel = fw_gap / g if g > 0.0 else 0.0
            return g, it, rel, True
        if it >= cap:
            rel = fw_gap / g if g > 0.0 else fw_gap
            return g, it, rel, False
        it += 1
        if (it & 15) == 2:
            g2 = _face_solve_euclidean(pts, sqnorms, alpha, center, g)
            if g2 > g:
                continue

        if aw_gap > fw_gap and away_i >= 0 and alpha[away_i] < 1.0:
            lam_max = alpha[away_i] / (1.0 - alpha[away_i])
            if away_d2 > 0.0:
                lam = aw_gap / (2.0 * away_d2)
                if lam > lam_max:
                    lam = lam_max
            else:
                lam = lam_max
            scale = 1.0 + lam
            for i in range(n):
                alpha[i] *= scale
            alpha[away_i] -= lam
            if alpha[away_i] < 1e-17:
                alpha[away_i] = 0.0
            for j in range(m):
                center[j] = scale * center[j] - lam * pts[away_i, j]
            if lam > 1e3:
                refresh = 0  # big drop steps cancel badly; rebuild the center
        else:
            lam = 1.0
            if best_d2 > 0.0:
                lam = fw_gap / (2.0 * best_d2)
                if lam > 1.0:
                    lam = 1.0
            scale = 1.0 - lam
            for i in range(n):
                alpha[i] *= scale
            alpha[best_i] += lam
            for j in range(m):
                center[j] = scale * center[j] + lam * pts[best_i, j]


@njit(cache=True)
def _core_meb_euclidean(pts, eps, solver_tol, cap):  # pragma: no cover - jitted
    """Greedy furthest-point coreset with re-solves after every insertion.

    Returns (selection, count, alpha_over_selection, center, g, iterations,
    converged). Selection holds input indices in insertion order; ties in the
    furthest-point scans go to the lowest index.
    """
    n, m = pts.shape
    sqnorms = np.empty(n)
    for i in range(n):
        s = 0.0
        for j in range(m):
            s += pts[i, j] * pts[i, j]
        sqnorms[i] = s

    sel = np.empty(n, np.int64)
    in_sel = np.zeros(n, np.bool_)
    sel_pts = np.empty((n, m))
    sel_sq = np.empty(n)
    alpha = np.zeros(n)
    center = np.empty(m)

    # Seed pair: farthest from the first point, then farthest from that.
    a = 0
    best = -1.0
    dots = np.dot(pts, pts[0])
    for i in range(n):
        d2 = sqnorms[i] - 2.0 * dots[i] + sqnorms[0]
        if d2 > best:
            best = d2
            a = i
    b = 0
    best = -1.0
    dots = np.dot(pts, pts[a])
    for i in range(n):
        d2 = sqnorms[i] - 2.0 * dots[i] + sqnorms[a]
        if d2 > best:
            best = d2
            b = i

    sel[0] = a
    in_sel[a] = True
    sel_pts[0] = pts[a]
    sel_sq[0] = sqnorms[a]
    cnt = 1
    if b != a:
        sel[1] = b
        in_sel[b] = True
        sel_pts[1] = pts[b]
        sel_sq[1] = sqnorms[b]
        cnt = 2
        alpha[0] = 0.5
        alpha[1] = 0.5
        g = 0.0
        for j in range(m):
            center[j] = 0.5 * (pts[a, j] + pts[b, j])
            diff = pts[a, j] - pts[b, j]
            g += diff * diff
        g *= 0.25
    else:
        alpha[0] = 1.0
        for j in range(m):
            center[j] = pts[a, j]
        g = 0.0

    total_iters = 0
    grow_bound = (1.0 + eps) * (1.0 + eps)
    while True:
        cc = 0.0
        for j in range(m):
            cc += center[j] * center[j]
        far = -1
        far_d2 = -1.0
        dots = np.dot(pts, center)
        for i in range(n):
            if in_sel[i]:
                continue
            d2 = sqnorms[i] - 2.0 * dots[i] + cc
            if d2 > far_d2:
                far_d2 = d2
                far = i
        if far < 0 or far_d2 <= grow_bound * g:
            return sel, cnt, alpha, center, g, total_iters, True
        sel[cnt] = far
        in_sel[far] = True
        sel_pts[cnt] = pts[far]
        sel_sq[cnt] = sqnorms[far]
        alpha[cnt] = 0.0
        cnt += 1
        g, it, _rel, ok = _fw_euclidean(
            sel_pts[:cnt], sel_sq[:cnt], alpha[:cnt], center, solver_tol, cap
        )
        total_iters += it
        if not ok:
            return sel, cnt, alpha, center, g, total_iters, False


class _MatrixColumns:
    """Gram columns backed by a materialized kernel matrix."""

    def __init__(self, gram: np.ndarray):
        self.gram = gram

    def col(self, j: int) -> np.ndarray:
        return self.gram[:, j]


class _LazyColumns:
    """Gram columns computed on demand and cached; for large point sets."""

    def __init__(self, pts: np.ndarray, spec: KernelSpec):
        self.pts = pts
        self.spec = spec
        self._cache: dict[int, np.ndarray] = {}

    def col(self, j: int) -> np.ndarray:
        c = self._cache.get(j)
        if c is None:
            c = kernel_cross(self.spec, self.pts, self.pts[j : j + 1])[:, 0]
            self._cache[j] = c
        return c


def _face_solve_gram(columns, diag, alpha, kalpha, g):
    """Support-face KKT solve for the Gram-column loop; accept-if-better.

    Solved in base-relative form with a rank-safe least-squares solve, so
    degenerate Gram matrices (e.g. the linear kernel beyond its feature
    dimension) still yield a usable candidate. Mutates alpha and kalpha on
    acceptance; returns the dual value.
    """
    sup = np.nonzero(alpha > 0.0)[0]
    k = sup.shape[0]
    if k < 2:
        return g
    if k > 512:
        sup = sup[np.argsort(alpha[sup])[-512:]]
        k = 512
    sup = sup[np.argsort(-alpha[sup])]  # heaviest first; it serves as the base
    gram_s = np.empty((k, k))
    for j_pos, j in enumerate(sup):
        gram_s[:, j_pos] = columns.col(int(j))[sup]
    diag_s = diag[sup]
    # relative system: entries are feature-space dot products against the base
    rel = gram_s[1:, 1:] - gram_s[1:, :1] - gram_s[:1, 1:] + gram_s[0, 0]
    rel_rhs = 0.5 * np.diagonal(rel).copy()
    alive = np.arange(k - 1)
    for _drop in range(k):
        if alive.shape[0] < 1:
            return g
        mat = 2.0 * rel[np.ix_(alive, alive)]
        lam = np.linalg.lstsq(mat, 2.0 * rel_rhs[alive], rcond=None)[0]
        w_base = 1.0 - float(np.sum(lam))
        low = int(np.argmin(lam))
        worst = min(float(lam[low]), w_base)
        if worst < -1e-12:
            if w_base <= float(lam[low]):
                return g  # base itself wants to leave; give up this attempt
            alive = np.delete(alive, low)
            continue
        w = np.zeros(k)
        w[0] = max(w_base, 0.0)
        w[alive + 1] = np.maximum(lam, 0.0)
        g_new = float(w @ diag_s) - float(w @ (gram_s @ w))
        if not (g_new >= g and np.isfinite(g_new)):
            return g
        alpha[:] = 0.0
        alpha[sup] = w
        kalpha[:] = 0.0
        for w_j, j in zip(w, sup):
            if w_j != 0.0:
                kalpha += w_j * columns.col(int(j))
        return g_new
    return g


def _fw_gram(columns, diag, alpha, kalpha, tol, cap):
    """Away-step Frank-Wolfe on Gram columns; mutates alpha and kalpha.

    Same face acceleration as the Euclidean loop. ``kalpha`` is the running
    K @ alpha vector. Returns (g, iterations, relative_gap, converged).
    """
    it = 0
    refresh = 0
    while True:
        if refresh == 0:
            kalpha[:] = 0.0
            for j in np.nonzero(alpha)[0]:
                kalpha += alpha[j] * columns.col(j)
            refresh = _REFRESH_EVERY
        refresh -= 1

        aka = float(alpha @ kalpha)
        g = max(float(alpha @ diag) - aka, 0.0)
        d2 = diag - 2.0 * kalpha + aka
        np.maximum(d2, 0.0, out=d2)

        best_i = int(np.argmax(d2))
        fw_gap = float(d2[best_i]) - g
        on_support = alpha > 0.0
        masked = np.where(on_support, d2, np.inf)
        away_i = int(np.argmin(masked))
        aw_gap = g - float(d2[away_i])

        thresh = tol * g + 1e-30
        if fw_gap <= thresh and aw_gap <= thresh:
            return g, it, (fw_gap / g if g > 0 else 0.0), True
        if it >= cap:
            return g, it, (fw_gap / g if g > 0 else fw_gap), False
        it += 1
        if (it & 15) == 2:
            g2 = _face_solve_gram(columns, diag, alpha, kalpha, g)
            if g2 > g:
                continue

        if aw_gap > fw_gap and alpha[away_i] < 1.0:
            lam_max = alpha[away_i] / (1.0 - alpha[away_i])
            if d2[away_i] > 0.0:
                lam = min(aw_gap / (2.0 * d2[away_i]), lam_max)
            else:
                lam = lam_max
            alpha *= 1.0 + lam
            alpha[away_i] -= lam
            if alpha[away_i] < 1e-17:
                alpha[away_i] = 0.0
            kalpha *= 1.0 + lam
            kalpha -= lam * columns.col(away_i)
            if lam > 1e3:
                refresh = 0  # big drop steps cancel badly; rebuild K @ alpha
        else:
            lam = min(fw_gap / (2.0 * d2[best_i]), 1.0) if d2[best_i] > 0 else 1.0
            alpha *= 1.0 - lam
            alpha[best_i] += lam
            kalpha *= 1.0 - lam
            kalpha += lam * columns.col(best_i)


@dataclass(frozen=True)
class SolveReport:
    """Result of a Euclidean ball solve.

    ``weights`` aligns with the input points (zero off the support);
    ``residual`` is the final relative duality gap.
    """

    ball: Ball
    weights: np.ndarray
    iterations: int
    residual: float


def _check_solve_args(n: int, tolerance: float) -> None:
    if n == 0:
        raise InvalidParameterError("solver needs at least one point")
    if not 0.0 < tolerance < 1.0:
        raise InvalidParameterError(f"tolerance must be in (0, 1), got {tolerance}")


def solve_meb(points, tolerance: float, max_iters: int = ITERATION_CAP) -> SolveReport:
    """Euclidean minimum enclosing ball to the given relative duality gap.

    The returned radius is the dual estimate: at most the true radius, and at
    least true / (1 + tolerance). Every input point lies within
    (1 + tolerance) times the returned radius of the center.
    """
    pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))
    _check_solve_args(pts.shape[0], tolerance)
    n = pts.shape[0]
    sqnorms = np.einsum("ij,ij->i", pts, pts)
    alpha = np.full(n, 1.0 / n)
    center = np.empty(pts.shape[1])
    g, iters, rel, ok = _fw_euclidean(pts, sqnorms, alpha, center, tolerance, max_iters)
    if not ok:
        raise ConvergenceError(
            f"ball solve did not reach tolerance {tolerance} in {max_iters} iterations",
            residual=rel,
        )
    np.maximum(alpha, 0.0, out=alpha)
    alpha /= alpha.sum()
    return SolveReport(Ball(center, float(np.sqrt(max(g, 0.0)))), alpha, iters, rel)


# Above this size the Gram matrix is not materialized; columns are cached
# lazily as the solver touches vertices.
_GRAM_LIMIT = 4096


def solve_kernel_meb(
    points,
    spec: KernelSpec,
    tolerance: float,
    max_iters: int = ITERATION_CAP,
) -> tuple[KernelCenter, float]:
    """Feature-space minimum enclosing ball via the dual simplex QP."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    _check_solve_args(pts.shape[0], tolerance)
    n = pts.shape[0]
    diag = kernel_diag(spec, pts)
    kalpha = np.empty(n)
    if n <= _GRAM_LIMIT:
        columns = _MatrixColumns(kernel_cross(spec, pts, pts))
        alpha = np.full(n, 1.0 / n)
    else:
        columns = _LazyColumns(pts, spec)
        alpha = np.zeros(n)
        alpha[0] = 1.0
    g, iters, rel, ok = _fw_gram(columns, diag, alpha, kalpha, tolerance, max_iters)
    if not ok:
        raise ConvergenceError(
            f"kernel ball solve did not reach tolerance {tolerance} in {max_iters} iterations",
            residual=rel,
        )
    np.maximum(alpha, 0.0, out=alpha)
    alpha /= alpha.sum()
    norm2 = float(alpha @ kalpha)
    center = KernelCenter(pts.copy(), alpha, norm2)
    return center, float(np.sqrt(max(g, 0.0)))
