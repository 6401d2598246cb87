"""Command-line entry point.

Subcommands:
  run     execute one experiment described by a config file
  recipe  write and run one of the stock experiment batches
  verify  self-test the circuits against exact integer arithmetic

Exit codes: 0 success, 1 config or file-system error, 2 numerical error.
Diagnostics go to stderr as single lines ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (
    DEFAULT_SEED,
    RECIPE_NAMES,
    ConfigError,
    format_config,
    parse_config_file,
    recipe,
    run_experiment,
    run_verify,
)
from .state import NumericalError


def _fail(kind: str, message: str) -> int:
    print(f"error: {kind}: {message}", file=sys.stderr)
    return 1 if kind == "config" else 2


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors follow the exit-code contract."""

    def error(self, message):
        raise ConfigError(message)


def main(argv=None) -> int:
    parser = _Parser(
        prog="catsim",
        description="Simulate the discretized cat map on a qubit register "
        "with tunable gate noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("--config", required=True, help="path to a key = value config file")

    p_recipe = sub.add_parser("recipe", help="run a stock experiment batch")
    p_recipe.add_argument("name", help=f"one of: {', '.join(RECIPE_NAMES)}")
    p_recipe.add_argument("--out", required=True, help="directory receiving one subdir per run")
    p_recipe.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_recipe.add_argument("--realizations", type=int, default=1)
    p_recipe.add_argument(
        "--configs-only",
        action="store_true",
        help="write the config files but do not run them",
    )

    p_verify = sub.add_parser("verify", help="circuit self-test against the exact map")
    p_verify.add_argument("--nq", type=int, required=True, help="qubits per coordinate register")
    p_verify.add_argument("--steps", type=int, default=10, help="map iterations to cross-check")

    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            run_experiment(parse_config_file(args.config))
        elif args.command == "recipe":
            for config in recipe(
                args.name, args.out, seed=args.seed, realizations=args.realizations
            ):
                if args.configs_only:
                    out = Path(config.output_dir)
                    out.mkdir(parents=True, exist_ok=True)
                    (out / "config.txt").write_text(format_config(config), encoding="ascii")
                else:
                    run_experiment(config)
        else:
            if not run_verify(args.nq, steps=args.steps):
                return _fail("numeric", "verification failed")
    except ConfigError as exc:
        return _fail("config", str(exc))
    except OSError as exc:
        return _fail("config", str(exc))
    except NumericalError as exc:
        return _fail("numeric", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
