"""Benchmark harness: stream replay, timing, error metric, CSV emission.

A run replays one stream in batches through one algorithm, measuring the
wall-clock update cost per batch and, at a fixed number of checkpoints, the
relative error of the returned coreset (or ball) against a high-precision
reference radius of the current window. Algorithms without sliding-window
support are re-run from the window's start at every batch, which is exactly
the cost a deployment would pay to emulate sliding semantics with them.

Timing covers update work only; parsing, reference solves, and metric
computation happen outside the clock. Runs are deterministic for a fixed
config: the error columns of two identical runs are identical.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .baseline import Ssmeb
from .batch import core_meb
from .data import gen_synthetic, load_dense_points
from .errors import InvalidConfigError, WarmupError
from .exact import WELZL_DIMENSION_CAP
from .kernels import KernelSpec, estimate_gamma
from .metrics import ball_error, coreset_error, exact_window_radius
from .streaming import Aomeb
from .swmeb import Swmeb
from .swmebplus import SwmebPlus

__all__ = [
    "ALGORITHMS",
    "RunConfig",
    "MetricRow",
    "run_experiment",
    "write_rows",
    "read_rows",
    "CSV_HEADER",
]

ALGORITHMS = ("coremeb", "aomeb", "swmeb", "swmebplus", "ssmeb")
CSV_HEADER = ("algorithm", "t", "error", "update_ms", "coreset_size", "stored_points")

_DEFAULT_EPS1 = {"euclidean": 1e-3, "gaussian": 1e-4}


@dataclass
class RunConfig:
    """One benchmark run: algorithm, space, stream, and window parameters.

    ``synthetic`` is (n, m, seed); exactly one of it and ``data_path`` must be
    set. ``eps1`` defaults to 1e-3 (Euclidean) or 1e-4 (kernel); ``eps2``
    defaults to 0.1 for the partitioned maintainer and to the capped geometric
    schedule for the pruned one. ``partition`` defaults to window // 10.
    """

    algorithm: str
    synthetic: tuple[int, int, int] | None = None
    data_path: str | Path | None = None
    space: str = "euclidean"
    gamma: float | str = "auto"
    window: int = 100_000
    batch: int = 100
    eps1: float | None = None
    eps2: float | None = None
    partition: int | None = None
    checkpoints: int = 100
    out: str | Path | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise InvalidConfigError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.space not in ("euclidean", "gaussian"):
            raise InvalidConfigError(f"space must be euclidean or gaussian, got {self.space!r}")
        if (self.synthetic is None) == (self.data_path is None):
            raise InvalidConfigError("provide exactly one of synthetic=(n,m,seed) or data_path")
        if self.window < 1 or self.batch < 1:
            raise InvalidConfigError("window and batch must be positive")
        if self.window % self.batch != 0:
            raise InvalidConfigError("batch size must divide the window size")
        if self.checkpoints < 1:
            raise InvalidConfigError("checkpoints must be positive")
        if self.eps1 is not None and not 0.0 < self.eps1 < 1.0:
            raise InvalidConfigError("eps1 must be in (0, 1)")
        if self.eps2 is not None and not 0.0 < self.eps2 < 1.0:
            raise InvalidConfigError("eps2 must be in (0, 1)")
        if isinstance(self.gamma, str) and self.gamma != "auto":
            raise InvalidConfigError("gamma must be 'auto' or a positive number")
        if not isinstance(self.gamma, str) and not self.gamma > 0:
            raise InvalidConfigError("gamma must be positive")

    @property
    def resolved_eps1(self) -> float:
        return self.eps1 if self.eps1 is not None else _DEFAULT_EPS1[self.space]

    @property
    def resolved_partition(self) -> int:
        return self.partition if self.partition is not None else max(self.window // 10, 1)


@dataclass
class MetricRow:
    """One checkpoint: stream position, relative error, mean per-batch update
    time since the previous checkpoint, and structure sizes."""

    algorithm: str
    t: int
    error: float
    update_ms: float
    coreset_size: int
    stored_points: int


class _SlidingDriver:
    """swmeb / swmebplus: incremental updates, warm-up answered by a plain
    append-only coreset over the prefix (metric plumbing, not timed)."""

    def __init__(self, cfg: RunConfig, spec: KernelSpec | None):
        eps1 = cfg.resolved_eps1
        if cfg.algorithm == "swmeb":
            eps2 = cfg.eps2 if cfg.eps2 is not None else 0.1
            self.structure = Swmeb(cfg.window, cfg.resolved_partition, eps1, eps2, space=spec)
        else:
            self.structure = SwmebPlus(cfg.window, eps1, cfg.eps2, space=spec)
        self.spec = spec
        self.eps1 = eps1
        self._prefix: Aomeb | None = None
        self._warm = True

    def update(self, batch: np.ndarray, window: np.ndarray) -> None:
        self.structure.insert_batch(batch)

    def after_update(self, batch: np.ndarray) -> None:
        if not self._warm:
            return
        try:
            self.structure.query()
            self._warm = False
            self._prefix = None
        except WarmupError:
            if self._prefix is None:
                self._prefix = Aomeb.from_batch(batch, self.eps1, self.spec)
            else:
                self._prefix.update_batch(batch)

    def snapshot(self, window: np.ndarray, exact_r: float) -> tuple[float, int, int]:
        inst = self._prefix if self._warm else self.structure.query()
        err = coreset_error(window, inst.ball, exact_r, self.spec)
        return err, inst.size, self.structure.stored_points()


class _CoremebRerunDriver:
    """Batch coreset rebuilt over the full window at every update."""

    def __init__(self, cfg: RunConfig, spec: KernelSpec | None):
        self.eps = cfg.resolved_eps1
        self.spec = spec
        self.coreset = None

    def update(self, batch: np.ndarray, window: np.ndarray) -> None:
        self.coreset = core_meb(window, self.eps, space=self.spec)

    def after_update(self, batch: np.ndarray) -> None:
        pass

    def snapshot(self, window: np.ndarray, exact_r: float) -> tuple[float, int, int]:
        err = coreset_error(window, self.coreset.ball, exact_r, self.spec)
        return err, self.coreset.size, len(window)


class _AomebRerunDriver:
    """Append-only coreset re-run from the window's start at every update."""

    def __init__(self, cfg: RunConfig, spec: KernelSpec | None):
        self.eps = cfg.resolved_eps1
        self.batch_size = cfg.batch
        self.spec = spec
        self.inst: Aomeb | None = None

    def update(self, batch: np.ndarray, window: np.ndarray) -> None:
        b = self.batch_size
        inst = Aomeb.from_batch(window[:b], self.eps, self.spec)
        for lo in range(b, window.shape[0], b):
            inst.update_batch(window[lo : lo + b])
        self.inst = inst

    def after_update(self, batch: np.ndarray) -> None:
        pass

    def snapshot(self, window: np.ndarray, exact_r: float) -> tuple[float, int, int]:
        err = coreset_error(window, self.inst.ball, exact_r, self.spec)
        return err, self.inst.size, len(window)


class _SsmebRerunDriver:
    """Single-ball baseline re-run over the window at every update."""

    def __init__(self, cfg: RunConfig, spec: KernelSpec | None):
        self.spec = spec
        self.state: Ssmeb | None = None

    def update(self, batch: np.ndarray, window: np.ndarray) -> None:
        state = Ssmeb(window[0], space=self.spec)
        state.update_batch(window[1:])
        self.state = state

    def after_update(self, batch: np.ndarray) -> None:
        pass

    def snapshot(self, window: np.ndarray, exact_r: float) -> tuple[float, int, int]:
        return ball_error(self.state.radius, exact_r), 0, len(window)


_DRIVERS = {
    "swmeb": _SlidingDriver,
    "swmebplus": _SlidingDriver,
    "coremeb": _CoremebRerunDriver,
    "aomeb": _AomebRerunDriver,
    "ssmeb": _SsmebRerunDriver,
}


def _load_stream(cfg: RunConfig) -> np.ndarray:
    if cfg.synthetic is not None:
        n, m, seed = cfg.synthetic
        return gen_synthetic(int(n), int(m), int(seed))
    return load_dense_points(cfg.data_path)


def _resolve_space(cfg: RunConfig, stream: np.ndarray) -> tuple[KernelSpec | None, float | None]:
    if cfg.space == "euclidean":
        return None, None
    if cfg.gamma == "auto":
        gamma = estimate_gamma(stream, seed=cfg.seed)
    else:
        gamma = float(cfg.gamma)
    return KernelSpec("gaussian", gamma=gamma), gamma


def _checkpoint_batches(total_batches: int, checkpoints: int) -> list[int]:
    # Exactly `checkpoints` distinct batch indices, the last at the stream end.
    return [total_batches * (j + 1) // checkpoints for j in range(checkpoints)]


def _warm_solver() -> None:
    # Force jit compilation / cache load outside any timed region.
    tiny = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0], [0.2, 0.2]])
    core_meb(tiny, 0.5)


def run_experiment(cfg: RunConfig) -> list[MetricRow]:
    """Replay the configured stream and return one row per checkpoint.

    Writes the CSV and its manifest next to it when ``cfg.out`` is set.
    """
    cfg.validate()
    _warm_solver()
    stream = _load_stream(cfg)
    spec, gamma = _resolve_space(cfg, stream)
    b = cfg.batch
    total_batches = stream.shape[0] // b
    if total_batches < 1:
        raise InvalidConfigError("stream shorter than one batch")
    if cfg.checkpoints > total_batches:
        raise InvalidConfigError("more checkpoints than batches")
    marks = set(_checkpoint_batches(total_batches, cfg.checkpoints))

    driver = _DRIVERS[cfg.algorithm](cfg, spec)
    rows: list[MetricRow] = []
    elapsed = 0.0
    batches_since_mark = 0
    for ib in range(total_batches):
        t = (ib + 1) * b
        batch = stream[ib * b : t]
        window = stream[max(0, t - cfg.window) : t]
        t0 = time.perf_counter()
        driver.update(batch, window)
        elapsed += time.perf_counter() - t0
        batches_since_mark += 1
        driver.after_update(batch)
        if (ib + 1) in marks:
            exact_r = exact_window_radius(window, spec)
            err, size, stored = driver.snapshot(window, exact_r)
            rows.append(
                MetricRow(
                    algorithm=cfg.algorithm,
                    t=t,
                    error=err,
                    update_ms=1e3 * elapsed / batches_since_mark,
                    coreset_size=size,
                    stored_points=stored,
                )
            )
            elapsed = 0.0
            batches_since_mark = 0

    if cfg.out is not None:
        out = Path(cfg.out)
        write_rows(rows, out)
        _write_manifest(cfg, stream, gamma, len(rows), out.with_suffix(out.suffix + ".manifest"))
    return rows


def write_rows(rows: list[MetricRow], path) -> None:
    """Emit the metric CSV with the fixed header."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow(
                [r.algorithm, r.t, repr(r.error), repr(r.update_ms), r.coreset_size, r.stored_points]
            )


def read_rows(path) -> list[MetricRow]:
    """Parse a metric CSV back into rows (lossless for write_rows output)."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise InvalidConfigError(f"unexpected CSV header {header}")
        for rec in reader:
            rows.append(
                MetricRow(rec[0], int(rec[1]), float(rec[2]), float(rec[3]), int(rec[4]), int(rec[5]))
            )
    return rows


def _write_manifest(cfg: RunConfig, stream: np.ndarray, gamma: float | None, nrows: int, path) -> None:
    if cfg.synthetic is not None:
        n, m, seed = cfg.synthetic
        dataset = f"synthetic:{n},{m},{seed}"
    else:
        dataset = f"file:{cfg.data_path}"
    if cfg.space == "euclidean":
        exact_ref = "welzl" if stream.shape[1] <= WELZL_DIMENSION_CAP else "frank_wolfe"
    else:
        exact_ref = "frank_wolfe"
    if cfg.eps2 is not None:
        eps2_desc = repr(cfg.eps2)
    elif cfg.algorithm == "swmeb":
        eps2_desc = "0.1"
    elif cfg.algorithm == "swmebplus":
        eps2_desc = "schedule:min(4^(i-1)*eps1/10,0.1)"
    else:
        eps2_desc = "none"
    pairs = [
        ("library", "mebstream"),
        ("version", __version__),
        ("algorithm", cfg.algorithm),
        ("space", cfg.space),
        ("gamma", "none" if gamma is None else repr(gamma)),
        ("gamma_sample_seed", str(cfg.seed)),
        ("dataset", dataset),
        ("points_used", str((stream.shape[0] // cfg.batch) * cfg.batch)),
        ("dimension", str(stream.shape[1])),
        ("window", str(cfg.window)),
        ("batch", str(cfg.batch)),
        ("eps1", repr(cfg.resolved_eps1)),
        ("eps2", eps2_desc),
        ("partition", str(cfg.resolved_partition) if cfg.algorithm == "swmeb" else "none"),
        ("checkpoints", str(cfg.checkpoints)),
        ("seed", str(cfg.seed)),
        ("exact_reference", exact_ref),
        ("rows", str(nrows)),
    ]
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in pairs:
            fh.write(f"{key}={value}\n")
