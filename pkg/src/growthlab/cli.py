"""Command-line harness.

    growthlab run CONFIG [--out DIR] [--key value ...]
    growthlab <experiment> [--out DIR] [--key value ...]
    growthlab report RUN_DIR

Any config key can be overridden one-to-one as a --key value flag pair
(e.g. --grid.n 64 --time.T 0.5).  Environment variables are never consulted.
Exit codes: 0 success, 2 config/usage error, 4 suite assertion failure,
5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import EXPERIMENTS, ConfigError, parse_config
from .experiments import NumericalFailure, SuiteCheckError, run_experiment

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERTION = 4
EXIT_NUMERICAL = 5


def _split_overrides(extra: list[str]) -> dict[str, str]:
    overrides = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r} (expected --key value)")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            i += 1
            if i >= len(extra):
                raise ConfigError(f"flag --{key} is missing a value")
            val = extra[i]
        overrides[key] = val
        i += 1
    return overrides


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="growthlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a suite described by a config file")
    p_run.add_argument("config", help="path to a key = value config file")
    p_run.add_argument("--out", default=None, help="output directory")

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} suite with defaults")
        p.add_argument("--out", default=None)

    p_rep = sub.add_parser("report", help="render figures + longform CSV for a run dir")
    p_rep.add_argument("run_dir")

    args, extra = parser.parse_known_args(argv)

    try:
        if args.command == "report":
            if extra:
                raise ConfigError(f"report takes no overrides: {extra}")
            from .report import report

            out = report(args.run_dir)
            print(json.dumps(out, indent=2))
            return EXIT_OK

        overrides = _split_overrides(extra)
        if args.command == "run":
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = parse_config(f"experiment = {args.command}\n")
        if overrides:
            cfg = cfg.with_overrides(overrides)
        summary = run_experiment(cfg, output_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SuiteCheckError as exc:
        print(f"suite assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    print(json.dumps({"experiment": summary["experiment"],
                      "verdicts": summary["verdicts"]}, indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
