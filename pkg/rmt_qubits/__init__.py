# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Command line interface for two-qubit correlations in a random-matrix environment."""

import argparse
import logging
import os
import sys
from importlib import metadata

from .compare import args_compare
from .compare import compare
from .errors import RmtQubitsError
from .evolve import args_evolve
from .evolve import evolve
from .finite_n import args_finite_n
from .finite_n import finite_n
from .markov_check import args_markov_check
from .markov_check import markov_check
from .resolvent import args_resolvent
from .resolvent import resolvent
from .scenario import RunContext
from .stationary import args_stationary
from .stationary import stationary
from .sweep import args_sweep
from .sweep import sweep
from .utils import LOG_LEVELS
from .utils import read_config
from .utils import remove_outputs
from .utils import setup_logging
from .utils import thread_count
from .variance_scan import args_variance_scan
from .variance_scan import variance_scan

try:
    __version__ = metadata.version("rmt_qubits")
except metadata.PackageNotFoundError:
    __version__ = "0.0.0"

cli_log = logging.getLogger("RmtQubitsCLI")

# sub-command name -> (argument function, help)
SUB_COMMANDS = {
    "evolve": (args_evolve, "Correlations along the weak-coupling trajectory, written as CSV"),
    "stationary": (args_stationary, "Stationary state of the weak-coupling channel"),
    "sweep": (args_sweep, "Concurrence map over slow time and one swept parameter"),
    "markov-check": (args_markov_check, "Semigroup test of the population channel"),
    "finite-n": (args_finite_n, "Finite-N Monte Carlo ensemble of the reduced state"),
    "variance-scan": (args_variance_scan, "Self-averaging scan of the entry variances against N"),
    "resolvent": (args_resolvent, "Self-consistent resolvent pair on a line in the upper half plane"),
    "compare": (args_compare, "Deviation of the finite-N ensemble from the channel over couplings"),
}

GLOBAL_CONFIG_KEYS = {"threads", "work_dir", "log_level"}


class RmtQubitsCLI:
    def __init__(self, work_dir=".", log_level="INFO", context=None):
        self._log = logging.getLogger("RmtQubitsCLI")
        self.do_log_level(log_level)

        self.work_dir = work_dir
        os.makedirs(self.work_dir, exist_ok=True)
        self.context = context or RunContext(version=__version__)
        self._log.debug("RmtQubitsCLI started with %d thread(s) in '%s'", self.context.threads, work_dir)

    def do_log_level(self, arg):
        """Set the log-level (DEBUG, INFO, WARNING, ERROR, CRITICAL)."""
        if arg not in LOG_LEVELS:
            self._log.warning("Invalid log-level: %s", arg)
            return

        logging.root.setLevel(arg)
        for handler in logging.root.handlers:
            if isinstance(handler, logging.StreamHandler):
                handler.setLevel(arg)

    def do_evolve(self, arg):
        """Correlation trajectory of the weak-coupling channel.

        Additional options are listed with -h/--help."""
        return evolve(self.context, self.work_dir, arg)

    def do_stationary(self, arg):
        """Stationary state and its correlations."""
        return stationary(self.context, self.work_dir, arg)

    def do_sweep(self, arg):
        """Concurrence map over slow time and one parameter.

        Additional options are listed with -h/--help."""
        return sweep(self.context, self.work_dir, arg)

    def do_markov_check(self, arg):
        """Semigroup test of the population channel."""
        return markov_check(self.context, self.work_dir, arg)

    def do_finite_n(self, arg):
        """Finite-N Monte Carlo ensemble.

        Additional options are listed with -h/--help."""
        return finite_n(self.context, self.work_dir, arg)

    def do_variance_scan(self, arg):
        return variance_scan(self.context, self.work_dir, arg)

    def do_resolvent(self, arg):
        """Self-consistent resolvent pair."""
        return resolvent(self.context, self.work_dir, arg)

    def do_compare(self, arg):
        return compare(self.context, self.work_dir, arg)


def error_line(error):
    message = " ".join(str(error).split()).replace('"', "'")
    return f'error={type(error).__name__} exit={error.exit_code} message="{message}"'


def _pre_parse(argv):
    parser = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    parser.add_argument("--config")
    known, _unknown = parser.parse_known_args(argv)
    return known


def _apply_config(parser, subparsers, path):
    """Install config-file values as parser defaults so that flags still win."""
    known = {dest for subparser in subparsers.values() for dest in vars(subparser.parse_known_args([])[0])}
    values = read_config(path, known | GLOBAL_CONFIG_KEYS)
    for subparser in subparsers.values():
        own = vars(subparser.parse_known_args([])[0])
        subparser.set_defaults(**{key: value for key, value in values.items() if key in own})
    parser.set_defaults(**{key: values[key] for key in ("work_dir", "log_level") if key in values})
    cli_log.info("Configuration read from '%s'", path)
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        description="Quantum correlations of two qubits in a random-matrix environment.", prog="rmt-qubits"
    )
    parser.add_argument(
        "--work_dir",
        metavar="<directory>",
        default=".",
        help="Directory results are written to (default: current directory)",
    )
    parser.add_argument(
        "--log_level",
        default="INFO",
        help="Set the log level (default: INFO)",
        type=str,
        choices=LOG_LEVELS,
    )
    parser.add_argument(
        "--config",
        metavar="<file>",
        help="Flat 'key = value' file with default flag values; flags on the command line win",
    )
    parser.add_argument(
        "--threads",
        type=int,
        metavar="K",
        help="Worker threads (default: config 'threads', then env-var RMT_QUBITS_THREADS, then 1)",
    )

    main_subparser = parser.add_subparsers(help="Available sub-commands:")
    subparsers = {}
    for name, (add_args, help_text) in SUB_COMMANDS.items():
        subparser = main_subparser.add_parser(name, help=help_text)
        add_args(subparser)
        subparser.set_defaults(func=name)
        subparsers[name] = subparser
    return parser, subparsers


def main(argv=None):
    setup_logging(compact=True)
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, subparsers = build_parser()

    if not argv:
        parser.print_help(sys.stderr)
        sys.exit(0)

    context = RunContext(version=__version__)
    try:
        pre = _pre_parse(argv)
        config = _apply_config(parser, subparsers, pre.config) if pre.config else {}
        args = parser.parse_args(argv)
        if not hasattr(args, "func"):
            raise SystemExit("No sub-command specified")
        context.threads = thread_count(args.threads, config.get("threads"))

        cli = RmtQubitsCLI(args.work_dir, args.log_level, context)
        if "evolve" == args.func:
            cli.do_evolve(args)
        if "stationary" == args.func:
            cli.do_stationary(args)
        if "sweep" == args.func:
            cli.do_sweep(args)
        if "markov-check" == args.func:
            cli.do_markov_check(args)
        if "finite-n" == args.func:
            cli.do_finite_n(args)
        if "variance-scan" == args.func:
            cli.do_variance_scan(args)
        if "resolvent" == args.func:
            cli.do_resolvent(args)
        if "compare" == args.func:
            cli.do_compare(args)
    except RmtQubitsError as ex_msg:
        remove_outputs(context.outputs)
        print(error_line(ex_msg), file=sys.stderr)
        sys.exit(ex_msg.exit_code)
    except Exception as ex_msg:
        remove_outputs(context.outputs)
        cli_log.exception("An error occurred: %s", ex_msg)
        sys.exit(1)
    cli_log.info("Done in %.3f s", context.wall_time())
