import io

import numpy as np
import pytest

from mebstream import estimate_gamma, gen_synthetic, load_dense_points, parse_dense_points, write_dense_points
from mebstream.errors import InvalidParameterError, ParseError


def test_parse_two_points():
    pts = list(parse_dense_points(io.StringIO("1 2 3\n4 5 6\n")))
    assert len(pts) == 2
    assert pts[0].tolist() == [1.0, 2.0, 3.0]
    assert pts[1].tolist() == [4.0, 5.0, 6.0]


def test_parse_ragged_row_reports_line():
    with pytest.raises(ParseError) as info:
        list(parse_dense_points(io.StringIO("1 2\n3\n")))
    assert info.value.line == 2


def test_parse_non_numeric_reports_line():
    with pytest.raises(ParseError) as info:
        list(parse_dense_points(io.StringIO("1 2\nx 4\n")))
    assert info.value.line == 2


def test_roundtrip_is_bitwise_exact(rng, tmp_path):
    pts = rng.normal(size=(1000, 7)) * rng.uniform(1e-8, 1e8, size=(1, 7))
    path = tmp_path / "pts.txt"
    write_dense_points(pts, path)
    back = load_dense_points(path)
    assert np.array_equal(pts, back)


def test_file_roundtrip_via_buffer(rng):
    pts = rng.normal(size=(50, 3))
    buf = io.StringIO()
    write_dense_points(pts, buf)
    buf.seek(0)
    assert np.array_equal(np.vstack(list(parse_dense_points(buf))), pts)


def test_gen_synthetic_deterministic():
    a = gen_synthetic(100, 5, seed=42)
    b = gen_synthetic(100, 5, seed=42)
    assert np.array_equal(a, b)
    c = gen_synthetic(100, 5, seed=43)
    assert not np.array_equal(a, c)


def test_gen_synthetic_moments():
    n, m = 10_000, 50
    pts = gen_synthetic(n, m, seed=7)
    assert np.abs(pts.mean(axis=0)).max() <= 4 / np.sqrt(n)
    # kernel width of a standard-normal cloud is about twice the dimension
    assert abs(estimate_gamma(pts) - 100.0) <= 10.0


def test_gen_synthetic_validation():
    with pytest.raises(InvalidParameterError):
        gen_synthetic(0, 3, seed=1)
    with pytest.raises(InvalidParameterError):
        gen_synthetic(3, 0, seed=1)
