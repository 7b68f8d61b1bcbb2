# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Semigroup test of the population channel."""

import logging

from .bvh import DET_TOL
from .bvh import MARKOV_TOL
from .bvh import BvhChannel
from .bvh import markov_diagnostic
from .errors import ValidationError
from .scenario import add_dos_args
from .scenario import build_scenario
from .utils import args_interactive
from .utils import format_number


def args_markov_check(parser):
    add_dos_args(parser)
    group = parser.add_argument_group("Semigroup grid")
    group.add_argument(
        "--grid-points", type=int, default=20, metavar="N", help="Points per axis of the (tau, tau') grid"
    )
    group.add_argument(
        "--tau-max",
        type=float,
        metavar="TAU",
        help="Grid end (default: twice the slowest relaxation time)",
    )


def format_diagnostic(diagnostic):
    det = diagnostic["det_phi3_inf"]
    residual = diagnostic["max_semigroup_residual"]
    det_text = "0" if abs(det) <= DET_TOL else format_number(det)
    if residual <= MARKOV_TOL:
        residual_text = f"residual<={MARKOV_TOL:g}"
    else:
        residual_text = f"residual={residual:.3e}"
    return f"det_phi3_inf={det_text} {residual_text} markovian={str(diagnostic['markovian']).lower()}"


def markov_check(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_markov_check, "Check whether the population channel is a semigroup.")
    if not args:
        return None
    if args.grid_points < 2:
        raise ValidationError(f"--grid-points = {args.grid_points} must be at least 2")

    scenario = build_scenario("markov-check", args, with_cond=False)
    channel = BvhChannel.from_dos(scenario.dos, args.env_energy, args.s)
    diagnostic = markov_diagnostic(channel, grid_points=args.grid_points, tau_max=args.tau_max)
    log.info(
        "Rates flat: %s, single-qubit channel Markovian: %s",
        diagnostic["is_flat"],
        diagnostic["one_qubit_markovian"],
    )
    print(format_diagnostic(diagnostic))
    return diagnostic
