"""Minimum enclosing ball coresets for batch, streaming, and sliding-window
data, in Euclidean space or a kernel feature space.

Layers, bottom up:

* geometry / exact — points, balls, and an exact small-dimension solver
* solver — Frank-Wolfe dual solves shared by everything above
* batch — greedy furthest-point coreset construction
* streaming — one-pass append-only coreset
* swmeb / swmebplus — sliding-window maintenance on top of the stream coreset
* baseline — single-ball streaming approximation
* data / metrics / bench / cli — benchmark harness
"""

__version__ = "0.1.0"

from .baseline import Ssmeb
from .batch import Coreset, core_meb
from .bench import ALGORITHMS, MetricRow, RunConfig, read_rows, run_experiment, write_rows
from .data import gen_synthetic, load_dense_points, parse_dense_points, write_dense_points
from .exact import welzl_exact
from .geometry import Ball, as_point, contains_expanded, distance, two_point_ball
from .kernels import (
    KernelBall,
    KernelCenter,
    KernelSpec,
    estimate_gamma,
    kernel_distance,
    kernel_distances,
    kernel_eval,
    kernel_radius,
)
from .metrics import ball_error, coreset_error, exact_window_radius, max_center_distance
from .solver import SolveReport, solve_kernel_meb, solve_meb
from .streaming import Aomeb
from .swmeb import Swmeb, coverage_epsilon
from .swmebplus import SwmebPlus, default_eps2_schedule

__all__ = [
    "__version__",
    "ALGORITHMS",
    "Aomeb",
    "Ball",
    "Coreset",
    "KernelBall",
    "KernelCenter",
    "KernelSpec",
    "MetricRow",
    "RunConfig",
    "SolveReport",
    "Ssmeb",
    "Swmeb",
    "SwmebPlus",
    "as_point",
    "ball_error",
    "contains_expanded",
    "core_meb",
    "coreset_error",
    "coverage_epsilon",
    "default_eps2_schedule",
    "distance",
    "estimate_gamma",
    "exact_window_radius",
    "gen_synthetic",
    "kernel_distance",
    "kernel_distances",
    "kernel_eval",
    "kernel_radius",
    "load_dense_points",
    "max_center_distance",
    "parse_dense_points",
    "read_rows",
    "run_experiment",
    "solve_kernel_meb",
    "solve_meb",
    "two_point_ball",
    "welzl_exact",
    "write_dense_points",
    "write_rows",
]
