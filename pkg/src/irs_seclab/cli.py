"""Command-line entry point ``irs-seclab``.

Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
3 infeasible optimization.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .config import load_config
from .errors import ConfigError, FeasibilityError
from .experiment import PRESETS, preset_config, run_experiment
from .results import emit_csv, to_csv_text

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _add_run_options(p):
    p.add_argument("--out", help="CSV output path (stdout when omitted)")
    p.add_argument("--threads", type=_positive_int, default=None,
                   help="worker threads (default: all cores); never changes the output")
    p.add_argument("--seed", type=_seed, default=None, help="override the root seed")
    p.add_argument("--trials", type=_positive_int, default=None, help="override the trial count")
    p.add_argument("--validate", action="store_true", help="check the configuration and exit")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress progress messages")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irs-seclab",
                                     description="IRS-aided secrecy and covertness experiments.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment described by a YAML file")
    run.add_argument("config", help="path to the configuration file")
    _add_run_options(run)
    for name in sorted(PRESETS):
        p = sub.add_parser(name, help=f"run the built-in '{name}' preset")
        _add_run_options(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config) if args.command == "run" else preset_config(args.command)
        cfg = cfg.with_overrides(seed=args.seed, trials=args.trials)
        if args.validate:
            print(f"ok {cfg.kind} digest={cfg.digest()}")
            return EXIT_OK
        table = run_experiment(cfg, threads=args.threads)
        if args.out:
            emit_csv(table, args.out)
        else:
            sys.stdout.write(to_csv_text(table))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FeasibilityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:  # noqa: BLE001 - top-level reporter
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
