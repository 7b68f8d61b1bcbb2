# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Self-averaging scan: largest entry variance against N."""

import logging

from .errors import ValidationError
from .oracle import TOPOLOGIES
from .oracle import variance_scan as scan_variances
from .scenario import add_coupling_arg
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import add_output_arg
from .scenario import add_seed_arg
from .scenario import build_scenario
from .scenario import write_results
from .utils import args_interactive
from .utils import format_number
from .utils import parse_list


def args_variance_scan(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    add_coupling_arg(parser, default=0.2)
    group = parser.add_argument_group("Scan")
    group.add_argument("--topology", choices=list(TOPOLOGIES), default="common", help="Coupling topology")
    group.add_argument(
        "--n-list", default="100,200,400", metavar="N1,N2,...", help="Comma separated environment dimensions"
    )
    group.add_argument("--draws", type=int, default=200, metavar="K", help="GUE draws per dimension")
    group.add_argument("--t", type=float, default=5.0, metavar="T", help="Physical time of the snapshot")
    add_seed_arg(group)
    add_output_arg(parser, "variance.csv")


def variance_scan(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_variance_scan, "Fit variance ~ N**-p over a list of dimensions.")
    if not args:
        return None

    scenario = build_scenario("variance-scan", args)
    n_list = parse_list(args.n_list, int)
    if len(n_list) < 2:
        raise ValidationError("--n-list needs at least two dimensions for the fit")
    if not args.t >= 0.0:
        raise ValidationError(f"--t = {args.t} must be non-negative")
    result = scan_variances(
        scenario.dos,
        n_list,
        args.s,
        args.v,
        scenario.cond,
        args.draws,
        args.t,
        target_energy=args.env_energy,
        seed=args.seed,
        topology=args.topology,
        threads=context.threads,
    )
    rows = [(row["n"], row["max_variance"], row["bound"]) for row in result["rows"]]
    write_results(
        context,
        work_dir,
        args.out,
        ("n", "max_variance", "bound"),
        rows,
        scenario,
        comments=[f"exponent={format_number(result['exponent'])}"],
        extra={"exponent": result["exponent"]},
    )
    bound_held = all(row["max_variance"] <= row["bound"] for row in result["rows"])
    log.info("Variance below the self-averaging bound at every N: %s", bound_held)
    print(f"exponent={format_number(result['exponent'])}")
    return result
