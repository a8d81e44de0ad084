"""Point file ingestion and synthetic stream generation.

File format: one point per line, coordinates separated by single spaces,
plain decimal text. The dimension is inferred from the first line and every
later line must match it.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import InvalidParameterError, ParseError

__all__ = ["parse_dense_points", "load_dense_points", "write_dense_points", "gen_synthetic"]


def parse_dense_points(source) -> Iterator[np.ndarray]:
    """Yield points from a text source (path, file object, or string).

    Raises ParseError with the offending 1-based line number on ragged rows
    or non-numeric tokens.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from _parse_lines(fh)
    elif isinstance(source, io.TextIOBase):
        yield from _parse_lines(source)
    else:
        raise InvalidParameterError("source must be a path or a text file object")


def _parse_lines(lines) -> Iterator[np.ndarray]:
    dim = None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        tokens = text.split(" ")
        try:
            values = [float(tok) for tok in tokens]
        except ValueError:
            raise ParseError(f"non-numeric token in {text!r}", line=lineno) from None
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise ParseError(
                f"expected {dim} coordinates, found {len(values)}", line=lineno
            )
        point = np.asarray(values, dtype=np.float64)
        if not np.all(np.isfinite(point)):
            raise ParseError("non-finite coordinate", line=lineno)
        yield point


def load_dense_points(source) -> np.ndarray:
    """Parse a whole file into an (n, m) array."""
    pts = list(parse_dense_points(source))
    if not pts:
        raise ParseError("empty point file", line=1)
    return np.vstack(pts)


def write_dense_points(points, target) -> None:
    """Write points in the dense text format, round-trip exact.

    ``repr`` of a Python float is the shortest decimal that parses back to
    the same double, so a write/parse cycle is bitwise lossless.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))

    def dump(fh):
        for row in pts:
            fh.write(" ".join(repr(float(v)) for v in row))
            fh.write("\n")

    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8") as fh:
            dump(fh)
    else:
        dump(target)


def gen_synthetic(n: int, m: int, seed: int) -> np.ndarray:
    """n points with independent standard normal coordinates, row order fixed
    by the seed."""
    if n < 1 or m < 1:
        raise InvalidParameterError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    return np.random.default_rng(seed).standard_normal((n, m))
