# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Finite-N Monte Carlo ensemble of the reduced two-qubit state."""

import logging

from .oracle import TOPOLOGIES
from .oracle import FiniteNModel
from .oracle import ensemble_series
from .scenario import add_coupling_arg
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import add_output_arg
from .scenario import add_seed_arg
from .scenario import build_scenario
from .scenario import validate_grid
from .scenario import write_results
from .states import csv_header
from .states import csv_row
from .utils import args_interactive


def entry_names(prefix):
    return [f"{prefix}_rho{row}{col}" for row in range(1, 5) for col in range(1, 5)]


def add_model_args(parser, topology=True):
    group = parser.add_argument_group("Finite-N model")
    if topology:
        group.add_argument("--topology", choices=list(TOPOLOGIES), default="common", help="Coupling topology")
    group.add_argument("--n", type=int, default=400, metavar="N", help="Environment dimension")
    group.add_argument("--draws", type=int, default=50, metavar="K", help="Number of GUE draws")
    group.add_argument(
        "--spectrum",
        choices=["quantile", "sample"],
        default="quantile",
        help="Environment levels at the density's midpoint quantiles or drawn from it",
    )
    group.add_argument(
        "--budget-gib", type=float, default=2.0, metavar="GIB", help="Memory budget of one diagonalization"
    )
    add_seed_arg(group)


def args_finite_n(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    add_coupling_arg(parser)
    add_model_args(parser)
    group = parser.add_argument_group("Second qubit and sampling")
    group.add_argument("--s-b", type=float, metavar="S", help="Splitting of qubit B (default: same as A)")
    group.add_argument("--v-b", type=float, metavar="V", help="Coupling of qubit B (default: same as A)")
    group.add_argument(
        "--pairing",
        choices=["antithetic", "independent"],
        default="antithetic",
        help="Pair every draw W with -W, or use independent draws only",
    )
    group.add_argument("--t-max", type=float, default=100.0, metavar="T", help="Final physical time")
    group.add_argument("--t-steps", type=int, default=100, metavar="N", help="Number of time steps")
    add_output_arg(parser, "mc.csv")


def model_from_args(density, args, **kwargs):
    return FiniteNModel.from_dos(
        density,
        args.n,
        args.s,
        args.v,
        getattr(args, "topology", "common"),
        args.env_energy,
        args.seed,
        spectrum=args.spectrum,
        budget=int(args.budget_gib * 1024**3),
        **kwargs,
    )


def finite_n(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_finite_n, "Ensemble mean, variance and error bars of rho_S(t).")
    if not args:
        return None

    scenario = build_scenario("finite-n", args)
    times = validate_grid(args.t_max, args.t_steps, name="t")
    model = model_from_args(scenario.dos, args, s_b=args.s_b, v_b=args.v_b)
    log.info(
        "Model %s: N=%d, %d draws, %d times", scenario.label(args.topology), model.n, args.draws, times.size
    )
    series = ensemble_series(
        model,
        scenario.cond,
        args.draws,
        times,
        antithetic=args.pairing == "antithetic",
        threads=context.threads,
    )

    header = ("t", "tau", *csv_header(), *entry_names("var"), *entry_names("se"))
    rows = [
        (
            item.time,
            args.v**2 * item.time,
            *csv_row(item.mean_state),
            *item.entry_variances.reshape(16).tolist(),
            *item.stderr.reshape(16).tolist(),
        )
        for item in series
    ]
    extra = {
        "finite_n_model": model.describe(),
        "max_entry_variance": max(item.max_variance() for item in series),
    }
    if hasattr(scenario.dos, "cdf"):
        extra["spectrum_ks_distance"] = model.ks_distance(scenario.dos)
    write_results(context, work_dir, args.out, header, rows, scenario, extra=extra)
    return series
