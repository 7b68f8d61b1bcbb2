# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Convergence of the finite-N ensemble mean to the weak-coupling channel."""

import logging

from .errors import ValidationError
from .finite_n import add_model_args
from .oracle import coupling_scan
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import add_output_arg
from .scenario import add_tau_args
from .scenario import build_scenario
from .scenario import validate_grid
from .scenario import write_results
from .utils import args_interactive
from .utils import parse_list

COMPARE_FIELDS = ("v", "tau", "t", "invariant_deviation", "entry_deviation", "max_stderr")


def args_compare(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    add_model_args(parser, topology=False)
    parser.add_argument(
        "--couplings", default="0.3,0.2,0.1", metavar="V1,V2,...", help="Comma separated couplings v"
    )
    add_tau_args(parser, tau_max=3.0, tau_steps=6)
    add_output_arg(parser, "compare.csv")


def compare(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(
        arg, args_compare, "Deviation of the finite-N ensemble mean from the channel, per coupling."
    )
    if not args:
        return None

    scenario = build_scenario("compare", args)
    couplings = parse_list(args.couplings, float)
    if not couplings:
        raise ValidationError("--couplings is empty")
    taus = validate_grid(args.tau_max, args.tau_steps)

    scan = coupling_scan(
        scenario.dos,
        args.n,
        args.s,
        couplings,
        scenario.cond,
        args.draws,
        taus,
        args.env_energy,
        args.seed,
        threads=context.threads,
        spectrum=args.spectrum,
        budget=int(args.budget_gib * 1024**3),
    )
    log.info("Largest deviation shrinks with v: %s", scan["monotone_in_v"])
    rows = []
    for v, result in scan["results"].items():
        rows.extend([v, *(row[name] for name in COMPARE_FIELDS[1:])] for row in result["rows"])
    write_results(
        context,
        work_dir,
        args.out,
        COMPARE_FIELDS,
        rows,
        scenario,
        extra={
            "picture": result["picture"],
            "couplings": scan["summary"],
            "monotone_in_v": scan["monotone_in_v"],
        },
    )
    return scan["summary"]
