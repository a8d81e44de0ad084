"""Append-only streaming coreset.

One-pass greedy maintenance: a point inside the (1 + eps)-expansion of the
current ball is discarded, anything else joins the coreset and the ball is
re-solved over the coreset (warm-started from the previous weights). Two
consequences carry all downstream guarantees:

* every processed point stays within (sqrt(2) + eps) of the final ball, and
* each coreset growth multiplies the radius by at least 1 + eps^2 / 8,

so the coreset size is logarithmic in the spread of the data. Works in
Euclidean or kernel space; in mini-batch mode the membership test for a whole
batch runs against the pre-batch ball and the ball is re-solved once.

The sliding-window structures drive many instances against the same input;
:func:`update_instances_point` and :func:`update_instances_batch` share the
per-input work across instances.
"""

from __future__ import annotations

import numpy as np

from .batch import Coreset, _core_meb_with_weights
from .errors import ConvergenceError, InvalidParameterError
from .geometry import Ball, containment_slack
from .kernels import KernelBall, KernelCenter, KernelSpec, kernel_cross, kernel_diag
from .solver import (
    ITERATION_CAP,
    _core_meb_euclidean,
    _fw_euclidean,
    _fw_gram,
    _MatrixColumns,
    resolve_tolerance,
)

__all__ = ["Aomeb", "update_instances_point", "update_instances_batch"]


def _as_batch(points) -> np.ndarray:
    return np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.float64)))


def _threshold(eps: float, radius: float) -> float:
    return (1.0 + eps) * radius + containment_slack(radius)


class _EuclideanEngine:
    """Coreset points, simplex weights, and an explicit center."""

    __slots__ = ("pts", "sq", "alpha", "count", "center", "g", "radius")

    def __init__(self, dim: int, capacity: int = 8):
        self.pts = np.empty((capacity, dim))
        self.sq = np.empty(capacity)
        self.alpha = np.zeros(capacity)
        self.count = 0
        self.center = np.zeros(dim)
        self.g = 0.0
        self.radius = 0.0

    def _grow(self, need: int) -> None:
        cap = self.pts.shape[0]
        if need <= cap:
            return
        new_cap = max(need, 2 * cap)
        for name in ("pts", "sq", "alpha"):
            old = getattr(self, name)
            fresh = np.zeros((new_cap,) + old.shape[1:])
            fresh[: self.count] = old[: self.count]
            setattr(self, name, fresh)

    def seed(self, rows: np.ndarray, alpha: np.ndarray, center: np.ndarray, g: float) -> None:
        self._grow(rows.shape[0])
        self.count = rows.shape[0]
        self.pts[: self.count] = rows
        self.sq[: self.count] = np.einsum("ij,ij->i", rows, rows)
        self.alpha[: self.count] = alpha
        self.center = center.copy()
        self.g = g
        self.radius = float(np.sqrt(max(g, 0.0)))

    def append(self, rows: np.ndarray) -> None:
        n = rows.shape[0]
        self._grow(self.count + n)
        self.pts[self.count : self.count + n] = rows
        self.sq[self.count : self.count + n] = np.einsum("ij,ij->i", rows, rows)
        self.alpha[self.count : self.count + n] = 0.0
        self.count += n

    def d2_batch(self, rows: np.ndarray) -> np.ndarray:
        # difference form: stable near the center, unlike the expanded form
        diff = rows - self.center
        return np.einsum("ij,ij->i", diff, diff)

    def d2_point(self, p: np.ndarray) -> float:
        d = p - self.center
        return float(d @ d)

    def distances(self, rows: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self.d2_batch(rows), 0.0))

    def resolve(self, tol: float) -> None:
        self.g, _it, rel, ok = _fw_euclidean(
            self.pts[: self.count],
            self.sq[: self.count],
            self.alpha[: self.count],
            self.center,
            tol,
            ITERATION_CAP,
        )
        if not ok:
            raise ConvergenceError("streaming re-solve hit its iteration cap", residual=rel)
        self.radius = float(np.sqrt(max(self.g, 0.0)))

    def ball(self) -> Ball:
        return Ball(self.center.copy(), self.radius)

    def copy(self) -> "_EuclideanEngine":
        other = _EuclideanEngine.__new__(_EuclideanEngine)
        other.pts = self.pts[: self.count].copy()
        other.sq = self.sq[: self.count].copy()
        other.alpha = self.alpha[: self.count].copy()
        other.count = self.count
        other.center = self.center.copy()
        other.g = self.g
        other.radius = self.radius
        return other


class _KernelEngine:
    """Coreset points with a growing Gram matrix and implicit center."""

    __slots__ = ("spec", "pts", "gram", "diag", "alpha", "kalpha", "count", "g", "radius")

    def __init__(self, spec: KernelSpec, dim: int, capacity: int = 8):
        self.spec = spec
        self.pts = np.empty((capacity, dim))
        self.gram = np.empty((capacity, capacity))
        self.diag = np.empty(capacity)
        self.alpha = np.zeros(capacity)
        self.kalpha = np.zeros(capacity)
        self.count = 0
        self.g = 0.0
        self.radius = 0.0

    def _grow(self, need: int) -> None:
        cap = self.pts.shape[0]
        if need <= cap:
            return
        new_cap = max(need, 2 * cap)
        k = self.count
        pts = np.empty((new_cap, self.pts.shape[1]))
        pts[:k] = self.pts[:k]
        gram = np.empty((new_cap, new_cap))
        gram[:k, :k] = self.gram[:k, :k]
        self.pts = pts
        self.gram = gram
        for name in ("diag", "alpha", "kalpha"):
            old = getattr(self, name)
            arr = np.zeros(new_cap)
            arr[:k] = old[:k]
            setattr(self, name, arr)

    def seed(self, rows: np.ndarray, alpha: np.ndarray, g: float) -> None:
        n = rows.shape[0]
        self._grow(n)
        self.count = n
        self.pts[:n] = rows
        self.gram[:n, :n] = kernel_cross(self.spec, rows, rows)
        self.diag[:n] = kernel_diag(self.spec, rows)
        self.alpha[:n] = alpha
        self.kalpha[:n] = self.gram[:n, :n] @ alpha
        self.g = g
        self.radius = float(np.sqrt(max(g, 0.0)))

    def append(self, rows: np.ndarray) -> None:
        n = rows.shape[0]
        k = self.count
        self._grow(k + n)
        self.pts[k : k + n] = rows
        if k:
            cross = kernel_cross(self.spec, self.pts[:k], rows)
            self.gram[:k, k : k + n] = cross
            self.gram[k : k + n, :k] = cross.T
        self.gram[k : k + n, k : k + n] = kernel_cross(self.spec, rows, rows)
        self.diag[k : k + n] = kernel_diag(self.spec, rows)
        self.alpha[k : k + n] = 0.0
        self.kalpha[k : k + n] = self.gram[k : k + n, :k] @ self.alpha[:k] if k else 0.0
        self.count += n

    def _norm2(self) -> float:
        k = self.count
        return float(self.alpha[:k] @ self.kalpha[:k])

    def d2_batch(self, rows: np.ndarray) -> np.ndarray:
        k = self.count
        cross = kernel_cross(self.spec, self.pts[:k], rows)
        return self._norm2() + kernel_diag(self.spec, rows) - 2.0 * (self.alpha[:k] @ cross)

    def d2_point(self, p: np.ndarray) -> float:
        return float(self.d2_batch(p[None, :])[0])

    def distances(self, rows: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self.d2_batch(rows), 0.0))

    def resolve(self, tol: float) -> None:
        k = self.count
        self.g, _it, rel, ok = _fw_gram(
            _MatrixColumns(self.gram[:k, :k]),
            self.diag[:k],
            self.alpha[:k],
            self.kalpha[:k],
            tol,
            ITERATION_CAP,
        )
        if not ok:
            raise ConvergenceError("streaming kernel re-solve hit its iteration cap", residual=rel)
        self.radius = float(np.sqrt(max(self.g, 0.0)))

    def ball(self) -> KernelBall:
        k = self.count
        center = KernelCenter(self.pts[:k].copy(), self.alpha[:k].copy(), self._norm2())
        return KernelBall(center, self.radius)

    def copy(self) -> "_KernelEngine":
        other = _KernelEngine.__new__(_KernelEngine)
        other.spec = self.spec
        k = self.count
        other.pts = self.pts[:k].copy()
        other.gram = self.gram[:k, :k].copy()
        other.diag = self.diag[:k].copy()
        other.alpha = self.alpha[:k].copy()
        other.kalpha = self.kalpha[:k].copy()
        other.count = k
        other.g = self.g
        other.radius = self.radius
        return other


class Aomeb:
    """Append-only streaming coreset over a Euclidean or kernel space.

    Construct with :meth:`from_point` (single-update mode) or
    :meth:`from_batch` (mini-batch mode, seeded by a batch coreset). One
    writer per instance; distinct instances are independent.
    """

    __slots__ = ("eps", "_engine", "_tol", "start_index", "_positions", "points_seen")

    def __init__(self, eps: float, engine, start_index: int, positions: list[int], seen: int):
        if not 0.0 < eps < 1.0:
            raise InvalidParameterError(f"eps must be in (0, 1), got {eps}")
        self.eps = eps
        self._engine = engine
        self._tol = resolve_tolerance(eps)
        self.start_index = start_index
        self._positions = positions
        self.points_seen = seen

    @classmethod
    def from_point(cls, point, eps: float, space: KernelSpec | None = None, start_index: int = 1) -> "Aomeb":
        """Start a stream from its first point: coreset {p}, radius 0."""
        if not 0.0 < eps < 1.0:
            raise InvalidParameterError(f"eps must be in (0, 1), got {eps}")
        row = _as_batch(point)
        if row.shape[0] != 1:
            raise InvalidParameterError("from_point takes a single point")
        if space is None:
            engine = _EuclideanEngine(row.shape[1])
            engine.seed(row, np.ones(1), row[0], 0.0)
        else:
            engine = _KernelEngine(space, row.shape[1])
            engine.seed(row, np.ones(1), 0.0)
        return cls(eps, engine, start_index, [start_index], 1)

    @classmethod
    def from_batch(cls, batch, eps: float, space: KernelSpec | None = None, start_index: int = 1) -> "Aomeb":
        """Start a stream from its first batch via a batch coreset build."""
        if not 0.0 < eps < 1.0:
            raise InvalidParameterError(f"eps must be in (0, 1), got {eps}")
        rows = _as_batch(batch)
        if rows.shape[0] == 0:
            raise InvalidParameterError("batch must be nonempty")
        tol = resolve_tolerance(eps)
        if space is None:
            sel, cnt, alpha, center, g, _iters, ok = _core_meb_euclidean(
                rows, eps, tol, ITERATION_CAP
            )
            if not ok:
                raise ConvergenceError("coreset seed solve hit its iteration cap", residual=np.nan)
            idx = sel[:cnt]
            engine = _EuclideanEngine(rows.shape[1])
            engine.seed(rows[idx], alpha[:cnt].copy(), center, g)
            positions = [start_index + int(i) for i in idx]
        else:
            cs, weights = _core_meb_with_weights(rows, eps, space=space, solver_tol=tol)
            engine = _KernelEngine(space, rows.shape[1])
            engine.seed(cs.points, weights.copy(), cs.ball.radius**2)
            positions = [start_index + int(i) for i in cs.positions]
        return cls(eps, engine, start_index, positions, rows.shape[0])

    # -- updates ---------------------------------------------------------

    def _next_position(self) -> int:
        return self.start_index + self.points_seen

    def _absorb(self, rows: np.ndarray, positions) -> None:
        self._engine.append(rows)
        self._positions.extend(positions)
        self._engine.resolve(self._tol)

    def update(self, point, position: int | None = None) -> bool:
        """Process one point; True if the coreset grew."""
        p = np.asarray(point, dtype=np.float64)
        pos = self._next_position() if position is None else position
        thr = _threshold(self.eps, self._engine.radius)
        d2 = self._engine.d2_point(p)
        self.points_seen += 1
        if d2 <= thr * thr:
            return False
        self._absorb(p[None, :], (pos,))
        return True

    def update_batch(self, batch, base_position: int | None = None) -> int:
        """Process a batch against the pre-batch ball; one re-solve at the end.

        Returns the number of points added to the coreset.
        """
        rows = _as_batch(batch)
        if rows.shape[0] == 0:
            raise InvalidParameterError("batch must be nonempty")
        base = self._next_position() if base_position is None else base_position
        thr = _threshold(self.eps, self._engine.radius)
        d2 = self._engine.d2_batch(rows)
        outside = d2 > thr * thr
        self.points_seen += rows.shape[0]
        added = int(np.count_nonzero(outside))
        if added:
            self._absorb(rows[outside], [base + int(i) for i in np.nonzero(outside)[0]])
        return added

    # -- accessors -------------------------------------------------------

    @property
    def radius(self) -> float:
        return self._engine.radius

    @property
    def center(self):
        """Explicit center (Euclidean) or implicit kernel center."""
        if isinstance(self._engine, _EuclideanEngine):
            return self._engine.center.copy()
        return self._engine.ball().center

    @property
    def ball(self) -> Ball | KernelBall:
        return self._engine.ball()

    @property
    def size(self) -> int:
        return self._engine.count

    @property
    def coreset(self) -> Coreset:
        return Coreset(
            self._engine.pts[: self._engine.count].copy(),
            np.array(self._positions),
            self.ball,
        )

    def distances_to_center(self, points) -> np.ndarray:
        """Distances from the maintained center to a stack of points."""
        return self._engine.distances(_as_batch(points))

    def copy(self) -> "Aomeb":
        return Aomeb(
            self.eps,
            self._engine.copy(),
            self.start_index,
            list(self._positions),
            self.points_seen,
        )


def _euclidean_instances(instances) -> bool:
    return bool(instances) and isinstance(instances[0]._engine, _EuclideanEngine)


def update_instances_point(instances, point: np.ndarray, position: int) -> None:
    """Feed one point to many instances, sharing the membership-test work."""
    if not _euclidean_instances(instances):
        for inst in instances:
            inst.update(point, position=position)
        return
    centers = np.empty((len(instances), point.shape[0]))
    thr = np.empty(len(instances))
    for i, inst in enumerate(instances):
        eng = inst._engine
        centers[i] = eng.center
        thr[i] = _threshold(inst.eps, eng.radius)
    diff = centers - point
    d2 = np.einsum("ij,ij->i", diff, diff)
    grew = np.nonzero(d2 > thr * thr)[0]
    for i, inst in enumerate(instances):
        inst.points_seen += 1
    for i in grew:
        instances[i]._absorb(point[None, :], (position,))


def update_instances_batch(instances, rows: np.ndarray, base_position: int) -> None:
    """Feed one batch to many instances, sharing the membership-test work.

    The shared test uses the expanded squared-distance form (one matrix
    product across all instances). That form carries cancellation noise of
    order eps_mach * |coordinates|^2, so instances whose threshold is near
    zero are re-tested with the stable difference form.
    """
    if not _euclidean_instances(instances):
        for inst in instances:
            inst.update_batch(rows, base_position=base_position)
        return
    rows_sq = np.einsum("ij,ij->i", rows, rows)
    scale = float(rows_sq.max(initial=0.0)) + 1.0
    centers = np.empty((len(instances), rows.shape[1]))
    thr2 = np.empty(len(instances))
    for i, inst in enumerate(instances):
        eng = inst._engine
        centers[i] = eng.center
        t = _threshold(inst.eps, eng.radius)
        thr2[i] = t * t
    cc = np.einsum("ij,ij->i", centers, centers)
    d2 = rows_sq[None, :] - 2.0 * (centers @ rows.T) + cc[:, None]
    outside = d2 > thr2[:, None]
    suspect = thr2 < 1e-12 * (cc + scale)
    for i in np.nonzero(suspect)[0]:
        outside[i] = instances[i]._engine.d2_batch(rows) > thr2[i]
    hit = np.nonzero(outside.any(axis=1))[0]
    n = rows.shape[0]
    for inst in instances:
        inst.points_seen += n
    for i in hit:
        mask = outside[i]
        instances[i]._absorb(
            rows[mask], [base_position + int(j) for j in np.nonzero(mask)[0]]
        )
