"""Sliding-window coreset maintenance with a single pruned index sequence.

Every arriving point (or batch) opens a fresh append-only instance, so the
index list always ends with instances covering short suffixes of the stream.
The list is then pruned by radius ratios: whenever the instances two apart
have radii within a (1 + eps2) factor, the index between them is dropped,
because the right neighbor already approximates every window that the dropped
index could serve. At most one expired index is retained at the head; it
witnesses an upper bound for the window radius. Queries answer from the
first unexpired index.

The per-rank eps2 schedule grows geometrically and is capped, which keeps the
head of the list (the indices that actually answer queries) tight while
aggressively thinning the tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, WarmupError
from .kernels import KernelSpec
from .streaming import Aomeb, _as_batch, update_instances_batch, update_instances_point

__all__ = ["SwmebPlus", "default_eps2_schedule"]


def default_eps2_schedule(eps1: float, factor: float = 4.0, cap: float = 0.1) -> Callable[[int], float]:
    """Per-rank pruning slack: min(factor**(i-1) * eps1 / 10, cap) for rank i."""
    base = eps1 / 10.0

    def schedule(rank: int) -> float:
        return min(base * factor ** (rank - 1), cap)

    return schedule


@dataclass
class _Entry:
    pos: int     # stream position the instance covers from
    inst: Aomeb


class SwmebPlus:
    """Sliding-window coreset with radius-ratio index pruning.

    ``eps2`` may be a constant or a callable mapping the 1-based index rank
    to a value in (0, 1); the default is the capped geometric schedule.
    Single writer per instance.
    """

    def __init__(
        self,
        window: int,
        eps1: float,
        eps2: float | Callable[[int], float] | None = None,
        space: KernelSpec | None = None,
    ):
        if window < 1:
            raise InvalidParameterError(f"window size must be positive, got {window}")
        if not 0.0 < eps1 < 1.0:
            raise InvalidParameterError(f"eps1 must be in (0, 1), got {eps1}")
        if eps2 is None:
            self._eps2 = default_eps2_schedule(eps1)
        elif callable(eps2):
            self._eps2 = eps2
        else:
            if not 0.0 < eps2 < 1.0:
                raise InvalidParameterError(f"eps2 must be in (0, 1), got {eps2}")
            self._eps2 = lambda rank, v=float(eps2): v
        self.window = window
        self.eps1 = eps1
        self.space = space
        self.now = 0
        self._entries: list[_Entry] = []

    def eps2(self, rank: int) -> float:
        """Pruning slack used at a given 1-based index rank."""
        return self._eps2(rank)

    # -- maintenance -----------------------------------------------------

    def insert(self, point) -> None:
        """Process one arriving point."""
        p = np.asarray(point, dtype=np.float64)
        self.now += 1
        self._entries.append(
            _Entry(self.now, Aomeb.from_point(p, self.eps1, self.space, start_index=self.now))
        )
        self._expire()
        update_instances_point([e.inst for e in self._entries[:-1]], p, self.now)
        self._prune()

    def insert_batch(self, batch) -> None:
        """Process a batch; one new index per batch, seeded by a batch coreset."""
        rows = _as_batch(batch)
        if rows.shape[0] == 0:
            raise InvalidParameterError("batch must be nonempty")
        base = self.now + 1
        self.now += rows.shape[0]
        self._entries.append(
            _Entry(base, Aomeb.from_batch(rows, self.eps1, self.space, start_index=base))
        )
        self._expire()
        update_instances_batch([e.inst for e in self._entries[:-1]], rows, base)
        self._prune()

    def _expire(self) -> None:
        lo = self.now - self.window + 1
        while len(self._entries) >= 2 and self._entries[1].pos < lo:
            self._entries.pop(0)

    def _prune(self) -> None:
        """Drop middle indices whose neighbors' radii are within (1 + eps2).

        Scans from the head and restarts after every deletion, so the final
        state is independent of transient orderings.
        """
        i = 0
        while i + 2 < len(self._entries):
            slack = 1.0 + self._eps2(i + 1)
            if self._entries[i].inst.radius <= slack * self._entries[i + 2].inst.radius:
                del self._entries[i + 1]
                i = 0
            else:
                i += 1

    # -- queries ---------------------------------------------------------

    def query(self) -> Aomeb:
        """Instance at the first unexpired index (the head index itself when
        nothing has expired). Raises WarmupError on an empty structure."""
        if not self._entries:
            raise WarmupError("no point processed yet")
        lo = self.now - self.window + 1
        if self._entries[0].pos >= lo:
            return self._entries[0].inst
        return self._entries[1].inst

    def index_count(self) -> int:
        return len(self._entries)

    def index_positions(self) -> list[int]:
        return [e.pos for e in self._entries]

    def radii(self) -> list[float]:
        return [e.inst.radius for e in self._entries]

    def stored_points(self) -> int:
        return sum(e.inst.size for e in self._entries)
