# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Correlation trajectory of the weak-coupling channel."""

import logging
import posixpath

from .bvh import BvhChannel
from .bvh import trajectory
from .quantifiers import REPORT_FIELDS
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import add_output_arg
from .scenario import add_tau_args
from .scenario import build_scenario
from .scenario import validate_grid
from .scenario import write_results
from .states import csv_header
from .states import csv_row
from .utils import args_interactive
from .utils import csv_text
from .utils import file_write


def event_comments(events):
    return [f"{kind} tau={tau:.6g}" for kind, tau in events]


def args_evolve(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    add_tau_args(parser)
    add_output_arg(parser, "traj.csv")
    parser.add_argument(
        "--states-out",
        metavar="FILE_NAME",
        help="Also write the evolved density matrices, 32 columns per row (re, im of each entry)",
    )


def evolve(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(
        arg,
        args_evolve,
        "Negativity, concurrence, discord and entropy along a slow-time grid.",
    )
    if not args:
        return None

    scenario = build_scenario("evolve", args)
    taus = validate_grid(args.tau_max, args.tau_steps)
    channel = BvhChannel.from_dos(scenario.dos, args.env_energy, args.s)
    log.info("Evolving model %s over %d points", scenario.label(), taus.size)
    result = trajectory(channel, scenario.cond, taus, threads=context.threads)

    rows = [(tau, *item.as_row()) for tau, item in zip(result.taus, result.reports)]
    write_results(
        context,
        work_dir,
        args.out,
        ("tau", *REPORT_FIELDS),
        rows,
        scenario,
        comments=event_comments(result.events),
        extra={"rates": channel.rates.as_dict()},
        events=result.events,
    )
    if args.states_out:
        context.outputs.append(posixpath.join(work_dir, args.states_out))
        state_rows = [(tau, *csv_row(state)) for tau, state in zip(result.taus, result.states)]
        file_write(work_dir, args.states_out, csv_text(("tau", *csv_header()), state_rows))

    _final_state, final = result.final()
    log.info(
        "Final tau=%g: N=%.6g C=%.6g D=%.6g S=%.6g",
        result.taus[-1],
        final.negativity,
        final.concurrence,
        final.discord,
        final.entropy,
    )
    return result
