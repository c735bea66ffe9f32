import argparse
import logging
import sys

import cli
from config import Config
from errors import ConfigError, ConvergenceError
from run_config import COMMANDS, FIELDS, PROBLEMS, SELECTORS, RunConfig


def setup_logging(quiet=False):
    """Sets up centralized logging on stderr; stdout carries only tables."""
    level = logging.WARNING if quiet else getattr(logging, Config.LOG_LEVEL)
    logging.basicConfig(
        level=level,
        format=Config.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def build_parser():
    parser = argparse.ArgumentParser(prog="fraclap", description="Fractional Laplacian toolkit on the ball.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("names", nargs="*", help="identities to check (verify only; default: all)")
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--n", type=int)
    parser.add_argument("--s", type=float)
    parser.add_argument("--r", type=float)
    parser.add_argument("--x", type=float, nargs="+", help="fixed point (eval) or sample point (verify)")
    parser.add_argument("--selector", choices=SELECTORS)
    parser.add_argument("--field", choices=FIELDS)
    parser.add_argument("--problem", choices=PROBLEMS)
    parser.add_argument("--residual", action="store_true", default=None)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=Config.OUTPUT_FORMATS)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--quiet", action="store_true")
    return parser


def load_run_config(args):
    config = RunConfig.load(args.config)
    config.apply_overrides(
        command=args.command,
        n=args.n,
        s=args.s,
        r=args.r,
        x=args.x,
        selector=args.selector,
        field=args.field,
        problem=args.problem,
        residual=args.residual,
        out=args.out,
        format=args.format,
        tol=args.tol,
        identities=args.names or None,
    )
    config.validate()
    return config


def main(argv=None):
    """Main entry point for the toolkit; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.quiet)

    try:
        Config.validate()
        config = load_run_config(args)
        return cli.run(config)
    except ConfigError as e:
        logging.critical(f"Configuration error: {e}")
        return cli.EXIT_CONFIG
    except ConvergenceError as e:
        logging.critical(f"Numerical non-convergence: {e}")
        return cli.EXIT_CONVERGENCE
    except ValueError as e:
        logging.critical(f"Invalid input: {e}")
        return cli.EXIT_CONFIG
    except Exception as e:
        logging.critical(f"An unexpected error occurred: {e}", exc_info=True)
        return cli.EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
