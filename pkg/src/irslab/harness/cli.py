"""Command-line entry point.

    irslab run --experiment fig7 [--config FILE] [--seed N] [--out FILE]
    irslab list-experiments
    irslab validate --config FILE

Exit codes: 0 success, 2 configuration error, 3 unknown experiment, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .config import ConfigError, parse_scenario
from .csvio import emit_csv, render_csv
from .experiments import EXPERIMENTS, UnknownExperiment, run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_UNKNOWN, EXIT_IO = 0, 2, 3, 4


def preset_path(exp_id: str):
    return resources.files("irslab.harness") / "presets" / f"{exp_id}.json"


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irslab", description="IRS simulation experiments")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment and write its CSV table")
    run.add_argument("--experiment", required=True, help="experiment id (see list-experiments)")
    run.add_argument("--config", help="scenario JSON (default: the bundled preset for the experiment)")
    run.add_argument("--seed", type=_seed, help="base seed (default: the scenario's seed)")
    run.add_argument("--out", help="output CSV path (default: stdout)")
    sub.add_parser("list-experiments", help="print the registered experiment ids")
    val = sub.add_parser("validate", help="parse and validate a scenario file")
    val.add_argument("--config", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list-experiments":
        for exp_id, (_, desc) in EXPERIMENTS.items():
            print(f"{exp_id}\t{desc}")
        return EXIT_OK
    if args.command == "validate":
        try:
            sc = parse_scenario(args.config)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"ok: {sc.name or args.config} (digest {sc.digest()})")
        return EXIT_OK

    if args.experiment not in EXPERIMENTS:
        print(f"unknown experiment {args.experiment!r}; try list-experiments", file=sys.stderr)
        return EXIT_UNKNOWN
    try:
        sc = parse_scenario(args.config if args.config else preset_path(args.experiment))
        result = run_experiment(args.experiment, sc, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnknownExperiment:
        return EXIT_UNKNOWN
    try:
        if args.out:
            emit_csv(result, args.out)
        else:
            sys.stdout.write(render_csv(result))
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
