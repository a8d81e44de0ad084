import math
import subprocess
import sys

import numpy as np
import pytest

from mebstream import MetricRow, RunConfig, read_rows, run_experiment, write_rows
from mebstream.bench import CSV_HEADER, _checkpoint_batches
from mebstream.cli import main as cli_main
from mebstream.errors import InvalidConfigError

SMALL = dict(synthetic=(3000, 8, 5), window=500, batch=50, checkpoints=10)


def test_config_validation():
    RunConfig(algorithm="swmeb", synthetic=(100, 2, 0)).validate()
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="nope", synthetic=(100, 2, 0)).validate()
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="swmeb").validate()  # no dataset
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="swmeb", synthetic=(100, 2, 0), data_path="x").validate()
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="swmeb", synthetic=(100, 2, 0), window=100, batch=33).validate()
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="swmeb", synthetic=(100, 2, 0), eps1=2.0).validate()
    with pytest.raises(InvalidConfigError):
        RunConfig(algorithm="swmeb", synthetic=(100, 2, 0), gamma="wide").validate()


def test_checkpoint_schedule_exact_count():
    for nb, k in ((100, 100), (1000, 100), (157, 20), (7, 7)):
        marks = _checkpoint_batches(nb, k)
        assert len(set(marks)) == k
        assert marks[-1] == nb


def test_run_experiment_row_count_and_shape(tmp_path):
    out = tmp_path / "rows.csv"
    cfg = RunConfig(algorithm="swmebplus", out=out, **SMALL)
    rows = run_experiment(cfg)
    assert len(rows) == 10
    assert all(r.algorithm == "swmebplus" for r in rows)
    assert all(r.error >= -1e-9 for r in rows)
    assert all(r.update_ms >= 0 for r in rows)
    assert rows[-1].t == 3000
    assert out.exists()
    manifest = out.with_suffix(out.suffix + ".manifest").read_text()
    assert "algorithm=swmebplus" in manifest
    assert "exact_reference=welzl" in manifest


def test_csv_roundtrip(tmp_path):
    rows = [
        MetricRow("swmeb", 100, 1.25e-3, 0.75, 12, 340),
        MetricRow("swmeb", 200, 0.0, 1e-6, 3, 17),
    ]
    path = tmp_path / "m.csv"
    write_rows(rows, path)
    header = path.read_text().splitlines()[0]
    assert header == ",".join(CSV_HEADER)
    assert read_rows(path) == rows


def test_error_columns_deterministic(tmp_path):
    cfg = dict(algorithm="swmeb", synthetic=(2000, 4, 11), window=400, batch=40, checkpoints=5)
    a = run_experiment(RunConfig(**cfg))
    b = run_experiment(RunConfig(**cfg))
    assert [r.error for r in a] == [r.error for r in b]
    assert [r.coreset_size for r in a] == [r.coreset_size for r in b]
    assert [r.stored_points for r in a] == [r.stored_points for r in b]


@pytest.mark.parametrize("algo", ["coremeb", "aomeb", "ssmeb", "swmeb", "swmebplus"])
def test_each_algorithm_produces_sane_errors(algo):
    cfg = RunConfig(algorithm=algo, synthetic=(1500, 6, 3), window=300, batch=30, checkpoints=5)
    rows = run_experiment(cfg)
    errs = [r.error for r in rows]
    assert all(e >= -1e-9 for e in errs)
    bound = 0.6 if algo == "ssmeb" else 0.2
    assert max(errs) <= bound
    if algo in ("coremeb", "aomeb", "ssmeb"):
        assert all(r.stored_points == min(r.t, 300) for r in rows)


def test_kernel_space_run():
    cfg = RunConfig(
        algorithm="swmebplus", synthetic=(1200, 4, 9), window=300, batch=30,
        checkpoints=4, space="gaussian", gamma="auto",
    )
    rows = run_experiment(cfg)
    assert len(rows) == 4
    assert all(r.error >= -1e-9 for r in rows)
    assert max(r.error for r in rows) <= 0.2


def test_gamma_fixed_value_run():
    cfg = RunConfig(
        algorithm="ssmeb", synthetic=(600, 3, 2), window=200, batch=20,
        checkpoints=3, space="gaussian", gamma=6.0,
    )
    rows = run_experiment(cfg)
    assert all(np.isfinite(r.error) for r in rows)


def test_cli_gen_and_run(tmp_path):
    data = tmp_path / "pts.txt"
    assert cli_main(["gen", "--synthetic", "400,3,1", "--out", str(data)]) == 0
    assert len(data.read_text().splitlines()) == 400

    out = tmp_path / "run.csv"
    rc = cli_main([
        "run", "--algo", "swmebplus", "--data", str(data),
        "--window", "100", "--batch", "10", "--checkpoints", "4",
        "--out", str(out),
    ])
    assert rc == 0
    rows = read_rows(out)
    assert len(rows) == 4
    assert out.with_suffix(out.suffix + ".manifest").exists()


def test_cli_sweep(tmp_path):
    out_dir = tmp_path / "sweep"
    rc = cli_main([
        "sweep", "--algo", "swmeb", "--synthetic", "1000,3,4",
        "--param", "window", "--values", "100,200",
        "--batch", "10", "--checkpoints", "3", "--out", str(out_dir),
    ])
    assert rc == 0
    assert sorted(p.name for p in out_dir.glob("*.csv")) == [
        "swmeb_window_100.csv",
        "swmeb_window_200.csv",
    ]


def test_cli_module_entrypoint(tmp_path):
    out = tmp_path / "pts.txt"
    proc = subprocess.run(
        [sys.executable, "-m", "mebstream", "gen", "--synthetic", "10,2,0", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_cli_error_reporting(tmp_path):
    rc = cli_main([
        "run", "--algo", "swmeb", "--synthetic", "100,2,0",
        "--window", "64", "--batch", "10", "--checkpoints", "2",
        "--out", str(tmp_path / "x.csv"),
    ])
    assert rc == 2  # batch must divide window: config error surfaced, not a crash
