# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Concurrence maps over slow time and one swept parameter."""

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dos as dos_module
from .bvh import BvhChannel
from .bvh import evolve
from .bvh import find_events
from .errors import ValidationError
from .quantifiers import concurrence
from .scenario import add_dos_args
from .scenario import add_initial_args
from .scenario import add_output_arg
from .scenario import add_tau_args
from .scenario import build_scenario
from .scenario import validate_grid
from .scenario import write_results
from .states import build_initial
from .states import from_blocks
from .states import initial_condition
from .states import to_blocks
from .utils import args_interactive
from .utils import format_number

# swept name -> (argparse dest, required initial family or density)
SWEEP_PARAMETERS = {
    "alpha": ("alpha", None),
    "alpha0": ("alpha", "product"),
    "alpha1": ("alpha", "bell1"),
    "alpha2": ("alpha", "bell2"),
    "alpha3": ("alpha3", "werner"),
    "gamma": ("gamma", "lorentzian"),
    "env-energy": ("env_energy", None),
}


def args_sweep(parser):
    add_initial_args(parser)
    add_dos_args(parser)
    add_tau_args(parser, tau_steps=200)

    group = parser.add_argument_group("Swept parameter")
    group.add_argument("--param", choices=list(SWEEP_PARAMETERS), help="Parameter to sweep")
    group.add_argument("--from", dest="start", type=float, metavar="X0", help="First value")
    group.add_argument("--to", dest="stop", type=float, metavar="X1", help="Last value")
    group.add_argument("--steps", type=int, default=101, metavar="N", help="Number of values, ends included")
    add_output_arg(parser, "sweep.csv")


def sweep_values(start, stop, steps):
    if steps < 1:
        raise ValidationError(f"--steps = {steps} must be positive")
    if steps == 1 and start != stop:
        raise ValidationError("a single-value sweep needs --from equal to --to")
    return np.linspace(start, stop, steps)


def _column_setup(args, param, value):
    dest, requirement = SWEEP_PARAMETERS[param]
    if requirement in {"product", "bell1", "bell2", "werner"} and args.init != requirement:
        raise ValidationError(f"--param {param} needs --init {requirement}, got '{args.init}'")
    if requirement == "lorentzian" and args.dos != "lorentzian":
        raise ValidationError(f"--param {param} needs --dos lorentzian, got '{args.dos}'")
    column = argparse.Namespace(**vars(args))
    setattr(column, dest, float(value))
    density = dos_module.from_spec(column.dos, column.gamma, column.gamma0)
    cond = initial_condition(column.init, column.alpha, column.alpha3, column.k, column.beta_phase)
    return BvhChannel.from_dos(density, column.env_energy, column.s), cond


def concurrence_column(channel, cond, taus):
    rho0 = to_blocks(build_initial(cond))
    values = [concurrence(from_blocks(evolve(channel, rho0, tau))) for tau in taus]
    return values, find_events(channel, rho0, taus)


def sweep(context, work_dir, arg, log=None):
    if not log:
        log = logging.getLogger(__name__)
    args = args_interactive(arg, args_sweep, "Concurrence over (tau, parameter), one column per value.")
    if not args:
        return None
    required = (("--param", args.param), ("--from", args.start), ("--to", args.stop))
    missing = [flag for flag, value in required if value is None]
    if missing:
        raise ValidationError(f"sweep needs {', '.join(missing)}")

    dest, _requirement = SWEEP_PARAMETERS[args.param]
    scenario = build_scenario("sweep", args, with_dos=dest != "gamma", overridden=(dest,))
    taus = validate_grid(args.tau_max, args.tau_steps)
    values = sweep_values(args.start, args.stop, args.steps)
    # every column is validated before the first one is computed
    setups = [_column_setup(args, args.param, value) for value in values]
    log.info("Sweeping %s over %d values and %d tau points", args.param, values.size, taus.size)

    def run(setup):
        return concurrence_column(setup[0], setup[1], taus)

    if context.threads > 1:
        with ThreadPoolExecutor(max_workers=context.threads) as pool:
            columns = list(pool.map(run, setups))
    else:
        columns = [run(setup) for setup in setups]

    header = ["tau", *(f"{args.param}={format_number(value)}" for value in values)]
    matrix = np.column_stack([taus, *(column for column, _events in columns)])
    column_events = [
        {"value": float(value), "events": [{"kind": kind, "tau": tau} for kind, tau in events]}
        for value, (_column, events) in zip(values, columns)
        if events
    ]
    for entry in column_events:
        log.debug("%s=%g: %s", args.param, entry["value"], entry["events"])
    write_results(
        context,
        work_dir,
        args.out,
        header,
        matrix.tolist(),
        scenario,
        extra={"swept": args.param, "values": values.tolist(), "column_events": column_events},
    )
    return values, matrix
