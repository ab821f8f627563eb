"""Command-line entry point: ``qudit-oneway <experiment> [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import EXPERIMENTS, ExperimentConfig, run, to_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudit-oneway", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--d", type=int, default=2, help="local dimension")
        p.add_argument("--pair", action="store_true", help="use a pair of qubit chains (2x2)")
        p.add_argument("--n", type=int, default=2, help="cluster length")
        p.add_argument("--channel", choices=("ad", "pd"), default="ad")
        p.add_argument("--t-min", type=float, default=0.0)
        p.add_argument("--t-max", type=float, default=3.0)
        p.add_argument("--steps", type=int, default=16)
        p.add_argument("--samples", type=int, default=2000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--encoding", choices=("G", "T", "L", "O", "M", "E"), default=None)
        p.add_argument("--ghz", action="store_true", help="add a GHZ comparison column")
        p.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=args.experiment,
        d=args.d,
        pair=args.pair,
        n=args.n,
        channel=args.channel,
        t_min=args.t_min,
        t_max=args.t_max,
        steps=args.steps,
        samples=args.samples,
        seed=args.seed,
        encoding=args.encoding,
        ghz=args.ghz,
        out=str(args.out) if args.out else None,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        text = to_csv(*run(cfg))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
