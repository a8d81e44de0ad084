"""Command-line benchmark runner.

Subcommands:

* ``run``   — one configuration, CSV + manifest out
* ``sweep`` — grid over the window size or the synthetic dimension
* ``gen``   — write a synthetic stream as a dense text point file
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import ALGORITHMS, RunConfig, run_experiment
from .data import gen_synthetic, write_dense_points
from .errors import MebstreamError

__all__ = ["main"]


def _parse_synthetic(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected n,m,seed")
    try:
        n, m, seed = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("expected three integers n,m,seed") from None
    return n, m, seed


def _parse_gamma(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("gamma must be 'auto' or a number") from None


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--synthetic", type=_parse_synthetic, metavar="N,M,SEED",
                     help="generate a standard-normal stream")
    src.add_argument("--data", type=Path, help="dense text point file")
    p.add_argument("--space", choices=("euclidean", "gaussian"), default="euclidean")
    p.add_argument("--gamma", type=_parse_gamma, default="auto",
                   help="gaussian kernel width, or 'auto' to estimate from the stream")
    p.add_argument("--window", type=int, default=100_000)
    p.add_argument("--batch", type=int, default=100)
    p.add_argument("--eps1", type=float, default=None)
    p.add_argument("--eps2", type=float, default=None)
    p.add_argument("--partition", type=int, default=None,
                   help="partition length for swmeb (default window/10)")
    p.add_argument("--checkpoints", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="harness seed (kernel width sampling)")


def _config_from_args(args, out) -> RunConfig:
    return RunConfig(
        algorithm=args.algo,
        synthetic=args.synthetic,
        data_path=args.data,
        space=args.space,
        gamma=args.gamma,
        window=args.window,
        batch=args.batch,
        eps1=args.eps1,
        eps2=args.eps2,
        partition=args.partition,
        checkpoints=args.checkpoints,
        out=out,
        seed=args.seed,
    )


def _cmd_run(args) -> int:
    cfg = _config_from_args(args, args.out)
    rows = run_experiment(cfg)
    errs = [r.error for r in rows]
    ms = [r.update_ms for r in rows]
    print(
        f"{cfg.algorithm}: {len(rows)} checkpoints, "
        f"mean error {sum(errs) / len(errs):.3e}, "
        f"mean update {sum(ms) / len(ms):.3f} ms/batch -> {args.out}"
    )
    return 0


def _cmd_sweep(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for value in args.values:
        if args.param == "window":
            args.window = value
        else:
            if args.synthetic is None:
                raise MebstreamError("sweeping the dimension needs --synthetic")
            n, _m, seed = args.synthetic
            args.synthetic = (n, value, seed)
        out = out_dir / f"{args.algo}_{args.param}_{value}.csv"
        cfg = _config_from_args(args, out)
        rows = run_experiment(cfg)
        errs = [r.error for r in rows]
        ms = [r.update_ms for r in rows]
        print(
            f"{args.param}={value}: mean error {sum(errs) / len(errs):.3e}, "
            f"mean update {sum(ms) / len(ms):.3f} ms/batch -> {out}"
        )
    return 0


def _cmd_gen(args) -> int:
    n, m, seed = args.synthetic
    write_dense_points(gen_synthetic(n, m, seed), args.out)
    print(f"wrote {n} points of dimension {m} (seed {seed}) -> {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mebstream",
        description="Benchmark harness for sliding-window ball coresets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    _add_run_flags(p_run)
    p_run.add_argument("--out", type=Path, required=True, help="CSV output path")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="grid over the window size or dimension")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--param", choices=("window", "m"), required=True)
    p_sweep.add_argument("--values", type=lambda s: [int(v) for v in s.split(",")],
                         required=True, metavar="V1,V2,...")
    p_sweep.add_argument("--out", type=Path, required=True, help="output directory")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_gen = sub.add_parser("gen", help="emit a synthetic point file")
    p_gen.add_argument("--synthetic", type=_parse_synthetic, metavar="N,M,SEED", required=True)
    p_gen.add_argument("--out", type=Path, required=True)
    p_gen.set_defaults(func=_cmd_gen)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MebstreamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
