# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Stationary state of the weak-coupling channel and its correlations."""

import logging

from .bvh import BvhChannel
from .bvh import relaxation_time
from .bvh import stationary_state
from .quantifiers import REPORT_FIELDS
from .quantifiers import report
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import build_scenario
from .scenario import write_results
from .states import csv_header
from .states import csv_row
from .utils import args_interactive
from .utils import format_number


def args_stationary(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    parser.add_argument(
        "-o",
        "--out",
        metavar="FILE_NAME",
        help="Write the stationary state and its correlations as a one-row CSV",
    )


def stationary(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_stationary, "Large-time limit of the weak-coupling channel.")
    if not args:
        return None

    scenario = build_scenario("stationary", args)
    channel = BvhChannel.from_dos(scenario.dos, args.env_energy, args.s)
    state = stationary_state(channel, scenario.cond)
    correlations = report(state)
    log.debug("Slowest relaxation time %.6g", relaxation_time(channel))

    fields = " ".join(
        f"{name}={format_number(value)}" for name, value in zip(REPORT_FIELDS, correlations.as_row())
    )
    print(f"model={scenario.label()} {fields}")

    if args.out:
        write_results(
            context,
            work_dir,
            args.out,
            (*REPORT_FIELDS, *csv_header()),
            [(*correlations.as_row(), *csv_row(state))],
            scenario,
            extra={"rates": channel.rates.as_dict(), "relaxation_time": relaxation_time(channel)},
        )
    return state, correlations
