"""Partitioned sliding-window coreset maintenance.

The window of the last N points is split into N/L fixed-length partitions.
When a partition seals, a single append-only instance scans it from its end
back to its start; snapshots of that instance become the partition's indices,
taken whenever the scan radius has grown by a (1 + eps2) factor since the
last snapshot, and additionally at least every L/10 positions so a flat
stretch of the stream cannot leave a partition with one lone index. Every
live index then keeps processing all future points, and a query answers from
the earliest unexpired index, whose instance covers the entire window except
for a short, provably well-approximated head segment.

Maintenance per arriving point: buffer it, seal/drop partitions when the
buffer fills, expire the earliest index once it leaves the window, and feed
the point to every live instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, WarmupError
from .kernels import KernelSpec
from .streaming import Aomeb, _as_batch, update_instances_batch, update_instances_point

__all__ = ["Swmeb", "coverage_epsilon"]


def coverage_epsilon(eps1: float, eps2: float) -> float:
    """Effective epsilon of the window coverage bound (sqrt(2) + eps*).

    Combines the per-instance slack with the radius-ratio gap allowed between
    neighboring snapshots on a partition.
    """
    return (1.0 + eps1) * (1.0 + eps2) + math.sqrt(eps2 * (2.0 + eps2)) - 1.0


@dataclass
class _IndexEntry:
    pos: int                # stream position the instance covers from
    inst: Aomeb
    radius_at_creation: float
    forced: bool            # created by the density floor, not radius growth


class Swmeb:
    """Sliding-window coreset with per-partition index sequences.

    N must be a multiple of the partition length L. Feed points with
    :meth:`insert` (or whole batches with :meth:`insert_batch`; then the
    batch size must divide L and indices snap to batch starts). Query with
    :meth:`query`, which raises WarmupError until the first partition seals.
    Single writer per instance.
    """

    def __init__(
        self,
        window: int,
        partition: int,
        eps1: float,
        eps2: float,
        space: KernelSpec | None = None,
    ):
        if partition < 1 or window < 1 or window % partition != 0:
            raise InvalidParameterError(
                f"partition length must divide the window size, got N={window}, L={partition}"
            )
        if not (0.0 < eps1 < 1.0 and 0.0 < eps2 < 1.0):
            raise InvalidParameterError("eps1 and eps2 must be in (0, 1)")
        self.window = window
        self.partition = partition
        self.eps1 = eps1
        self.eps2 = eps2
        self.space = space
        self.max_index_gap = max(1, partition // 10)
        self.now = 0
        self._buffer: list[np.ndarray] = []
        self._partitions: list[list[_IndexEntry]] = []

    # -- maintenance -----------------------------------------------------

    def insert(self, point) -> None:
        """Process one arriving point."""
        p = np.asarray(point, dtype=np.float64)
        self.now += 1
        self._buffer.append(p)
        fresh = self._seal_if_full(batch_size=None)
        self._expire()
        live = [e.inst for part in self._partitions if part is not fresh for e in part]
        update_instances_point(live, p, self.now)

    def insert_batch(self, batch) -> None:
        """Process a batch of points; indices align to batch starts."""
        rows = _as_batch(batch)
        b = rows.shape[0]
        if b == 0:
            raise InvalidParameterError("batch must be nonempty")
        if self.partition % b != 0:
            raise InvalidParameterError(
                f"batch size must divide the partition length, got b={b}, L={self.partition}"
            )
        base = self.now + 1
        self.now += b
        self._buffer.extend(rows)
        fresh = self._seal_if_full(batch_size=b)
        self._expire()
        live = [e.inst for part in self._partitions if part is not fresh for e in part]
        update_instances_batch(live, rows, base)

    def _seal_if_full(self, batch_size: int | None):
        if len(self._buffer) < self.partition:
            return None
        if len(self._buffer) > self.partition:
            raise InvalidParameterError("buffer overran the partition length")
        if self.now > self.window and self._partitions:
            self._partitions.pop(0)  # fully expired partition and its indices
        block = np.vstack(self._buffer)
        entries = self._scan_partition(block, batch_size)
        self._partitions.append(entries)
        self._buffer = []
        return entries

    def _scan_partition(self, block: np.ndarray, batch_size: int | None) -> list[_IndexEntry]:
        """Reverse scan of a sealed partition, snapshotting the indices.

        The scan itself runs point by point even under batch insertion; only
        the snapshot positions are restricted to batch starts then.
        """
        length = block.shape[0]
        start_pos = self.now - length + 1
        entries: list[_IndexEntry] = []
        threshold = 0.0
        last_index_pos: int | None = None
        inst: Aomeb | None = None
        for offset in range(length - 1, -1, -1):
            pos = start_pos + offset
            if inst is None:
                inst = Aomeb.from_point(block[offset], self.eps1, self.space, start_index=pos)
            else:
                inst.update(block[offset], position=pos)
            if batch_size is not None and (pos - start_pos) % batch_size != 0:
                continue
            r = inst.radius
            triggered = r >= (1.0 + self.eps2) * threshold
            forced = (
                not triggered
                and last_index_pos is not None
                and last_index_pos - pos >= self.max_index_gap
            )
            if triggered or forced:
                snap = inst.copy()
                snap.start_index = pos
                entries.append(_IndexEntry(pos, snap, r, forced))
                last_index_pos = pos
                if triggered:
                    threshold = r
        return entries

    def _expire(self) -> None:
        lo = self.now - self.window + 1
        if not self._partitions:
            return
        first = self._partitions[0]
        while first and first[-1].pos < lo:
            first.pop()

    # -- queries ---------------------------------------------------------

    def query(self) -> Aomeb:
        """Instance at the earliest live index; covers the whole window but a
        bounded head segment. Raises WarmupError before any partition seals."""
        if not self._partitions or not self._partitions[0]:
            raise WarmupError("no sealed partition yet; fall back to a plain stream coreset")
        return self._partitions[0][-1].inst

    def index_count(self) -> int:
        return sum(len(p) for p in self._partitions)

    def stored_points(self) -> int:
        """Points held live: all instance coresets plus the buffer."""
        total = len(self._buffer)
        for part in self._partitions:
            for entry in part:
                total += entry.inst.size
        return total
