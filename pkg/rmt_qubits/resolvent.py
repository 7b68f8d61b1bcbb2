# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Self-consistent resolvent pair along a horizontal line in the upper half plane."""

import logging

import numpy as np

from .errors import ValidationError
from .meanfield import solve_selfconsistent
from .scenario import add_coupling_arg
from .scenario import add_dos_args
from .scenario import add_output_arg
from .scenario import build_scenario
from .scenario import write_results
from .utils import args_interactive


def args_resolvent(parser):
    add_dos_args(parser, env_energy=False)
    add_coupling_arg(parser, default=0.5)
    group = parser.add_argument_group("Spectral line z = e + i y")
    group.add_argument("--z-imag", type=float, default=0.5, metavar="Y", help="Imaginary part y of z")
    group.add_argument("--e-from", type=float, default=-5.0, metavar="E0", help="First real part")
    group.add_argument("--e-to", type=float, default=5.0, metavar="E1", help="Last real part")
    group.add_argument("--steps", type=int, default=500, metavar="N", help="Number of grid steps")
    group.add_argument(
        "--method",
        choices=["fixed-point", "root"],
        default="fixed-point",
        help="Damped iteration (falls back to root finding) or root finding only",
    )
    add_output_arg(parser, "g.csv")


def resolvent(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_resolvent, "Solve the resolvent pair (g_plus, g_minus) on a grid.")
    if not args:
        return None

    scenario = build_scenario("resolvent", args, with_cond=False)
    if args.steps < 1:
        raise ValidationError(f"--steps = {args.steps} must be positive")
    if not args.e_to > args.e_from:
        raise ValidationError(f"--e-to = {args.e_to} must exceed --e-from = {args.e_from}")
    energies = np.linspace(args.e_from, args.e_to, args.steps + 1)

    rows = []
    warm = None
    iterations = 0
    for e in energies:
        sample = solve_selfconsistent(
            scenario.dos, args.s, args.v, complex(e, args.z_imag), method=args.method, initial=warm
        )
        warm = (sample.g_plus, sample.g_minus)
        iterations = max(iterations, sample.iterations)
        rows.append((e, sample.g_plus.real, sample.g_plus.imag, sample.g_minus.real, sample.g_minus.imag))
    log.info("Solved %d points, at most %d iterations each", energies.size, iterations)

    write_results(
        context,
        work_dir,
        args.out,
        ("e", "re_g_plus", "im_g_plus", "re_g_minus", "im_g_minus"),
        rows,
        scenario,
        extra={"max_iterations": iterations},
    )
    return rows
