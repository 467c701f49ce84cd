"""Command line entry point: ``seta run`` and ``seta sweep``.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..errors import ConfigError
from .config import METHODS, apply_overrides, from_dict, load_config
from .sweep import expand_sweep, sweep
from .runner import run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (default: built-in synthetic SeTa experiment)")
    p.add_argument("--method", choices=METHODS, help="selection method (default: seta)")
    p.add_argument("--r", type=float, help="down-sampling / annealing ratio, also the baseline ratio (default: 0.6)")
    p.add_argument("--k", type=int, help="number of loss clusters (default: 10)")
    p.add_argument("--alpha", type=float, help="window scale; window = ceil(alpha * k) clusters (default: 0.5)")
    p.add_argument("--epochs", type=int, help="training epochs (default: 30)")
    p.add_argument("--seed", type=int, help="run a single seed instead of the config's seed list (default: 0)")
    p.add_argument("--out", help="output directory (default: runs/default, runs/sweep for sweeps)")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seta",
        description="Loss-clustered sliding-window data pruning experiments.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one experiment config over its seeds",
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(run_p)
    sw_p = sub.add_parser("sweep", help="run a sweep file and write summary.csv",
                          formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    _add_common(sw_p)
    sw_p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    flags = {k: getattr(args, k) for k in ("method", "r", "k", "alpha", "epochs", "seed", "out")}
    try:
        raw = load_config(args.config) if args.config else {}
        if args.command == "run":
            cfg = from_dict(apply_overrides(raw, **flags))
        else:
            if not args.config:
                raise ConfigError("sweep needs --config")
            configs, summary = expand_sweep(raw, **flags)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "run":
            for res in run_experiment(cfg):
                print(f"seed={res.seed} method={res.method} rho_bar={res.rho_bar:.4f} "
                      f"final_acc={res.final_acc} -> {res.out_dir}")
        else:
            rows = sweep(configs, summary, workers=args.workers)
            failed = sum(1 for r in rows if r["rho_bar"] != r["rho_bar"])
            print(f"{len(rows)} runs ({failed} failed) -> {summary}")
            if failed:
                return EXIT_RUNTIME
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
