"""Command-line interface: run one experiment, write CSV/JSON (+ figures).

Usage: ``oscillab <subcommand> [--config FILE] [--out PATH] [--seed N]
[--threads N] [--no-figures]``.  The exit code is 0 exactly when every
verdict of the configured experiment passes.
"""

from __future__ import annotations

import argparse
import sys

from .lab import EXPERIMENTS, load_config, run_experiment, write_report

_DESCRIPTIONS = {
    "verify-hormander": "kernel difference integrals against the analytic ceiling",
    "oscillation": "point sweep of the line oscillation of one function",
    "strong-p": "L^p -> L^p ratios over the default family",
    "weak11": "weak (1,1) distribution ratios over a lambda grid",
    "h1": "atom L1 band and ergodic H1 ratios",
    "bmo": "mean-oscillation ratios against sup norms",
    "fstar": "oscillation L1 against the maximal function L1",
    "transfer": "line vs ergodic oscillation along flow orbits",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscillab",
        description="numerical laboratory for oscillation operators of "
                    "ergodic averages",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        cmd = sub.add_parser(name, help=_DESCRIPTIONS[name])
        cmd.add_argument("--config", metavar="FILE",
                         help="JSON file overriding the experiment defaults")
        cmd.add_argument("--out", metavar="PATH",
                         help="output base path (writes PATH.csv and PATH.json)")
        cmd.add_argument("--seed", type=int, metavar="N",
                         help="override the config seed")
        cmd.add_argument("--threads", type=int, default=1, metavar="N",
                         help="worker threads for row computation (default 1)")
        cmd.add_argument("--no-figures", action="store_true",
                         help="skip PNG rendering, write only CSV/JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config) if args.config else {}
    if args.seed is not None:
        config = dict(config)
        config["seed"] = args.seed

    report = run_experiment(args.command, config, threads=args.threads)

    base = args.out if args.out else f"oscillab_{args.command.replace('-', '_')}"
    written = write_report(report, base, figures=not args.no_figures)
    for path in written:
        print(f"wrote {path}")
    for name, ok in report.verdicts.items():
        print(f"verdict {name}: {'PASS' if ok else 'FAIL'}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
