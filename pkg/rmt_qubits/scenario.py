# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Scenario parameters shared by the sub-commands.

Argument groups, validation of the flat parameter set into model objects, result
writing and the run manifest.
"""

import logging
import posixpath
import time
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from . import dos as dos_module
from .errors import ValidationError
from .states import FAMILIES
from .states import initial_condition
from .states import model_name
from .utils import csv_text
from .utils import file_write
from .utils import manifest_name

_log = logging.getLogger(__name__)

TOPOLOGY_LETTERS = {"common": "C", "independent": "I", "free": "F"}

_INITIAL = {"init", "alpha", "alpha3", "k", "beta_phase"}
_ENVIRONMENT = {"dos", "gamma", "gamma0", "env_energy", "s"}
_OUTPUT = {"out", "states_out"}

# parameters each mode reads; everything else recorded in a manifest is inert
MODE_PARAMETERS = {
    "evolve": _INITIAL | _ENVIRONMENT | _OUTPUT | {"tau_max", "tau_steps"},
    "stationary": _INITIAL | _ENVIRONMENT | _OUTPUT,
    "sweep": _INITIAL | _ENVIRONMENT | _OUTPUT | {"tau_max", "tau_steps", "param", "start", "stop", "steps"},
    "finite-n": _INITIAL
    | _ENVIRONMENT
    | _OUTPUT
    | {"v", "s_b", "v_b", "topology", "n", "draws", "t_max", "t_steps", "seed", "spectrum", "pairing"},
    "variance-scan": _INITIAL | _ENVIRONMENT | _OUTPUT | {"v", "topology", "n_list", "draws", "t", "seed"},
    "resolvent": _ENVIRONMENT | _OUTPUT | {"v", "z_imag", "e_from", "e_to", "steps", "method"},
    "compare": _INITIAL
    | _ENVIRONMENT
    | _OUTPUT
    | {"couplings", "n", "draws", "tau_max", "tau_steps", "seed", "spectrum"},
}

_DOS_RATE_KEYS = {"lorentzian": "gamma", "flat": "gamma0"}


@dataclass
class RunContext:
    """Per-invocation state handed to every sub-command."""

    threads: int = 1
    version: str = "0.0.0"
    outputs: list = field(default_factory=list)
    started: float = field(default_factory=time.perf_counter)

    def wall_time(self):
        return time.perf_counter() - self.started


def add_initial_args(parser):
    group = parser.add_argument_group("Initial condition")
    group.add_argument("--init", choices=list(FAMILIES), default="bell1", help="Initial-condition family")
    group.add_argument(
        "--alpha",
        type=float,
        default=2**-0.5,
        metavar="A",
        help="Amplitude alpha of the family (alpha0, alpha1, alpha2 or alpha_k for werner)",
    )
    group.add_argument(
        "--alpha3", type=float, default=1.0, metavar="A3", help="Werner mixing weight in [-1/3, 1]"
    )
    group.add_argument("--k", type=int, choices=[1, 2], default=1, help="Bell-like family used by werner")
    group.add_argument(
        "--beta-phase", type=float, default=0.0, metavar="PHI", help="Phase of the complex amplitude beta"
    )


def add_dos_args(parser, env_energy=True):
    group = parser.add_argument_group("Environment")
    group.add_argument(
        "--dos",
        default="lorentzian",
        metavar="KIND",
        help="Density of states: 'lorentzian', 'flat' or 'file:PATH' (two columns, energy and density)",
    )
    group.add_argument("--gamma", type=float, metavar="G", help="Lorentzian width")
    group.add_argument("--gamma0", type=float, metavar="G0", help="Constant rate of the flat density")
    if env_energy:
        group.add_argument(
            "--env-energy", type=float, default=0.0, metavar="E", help="Energy E of the environment state"
        )
    group.add_argument(
        "--qubit-splitting", "--s", dest="s", type=float, default=1.0, metavar="S", help="Qubit splitting s"
    )


def add_coupling_arg(parser, default=0.1):
    parser.add_argument(
        "--coupling", "--v", dest="v", type=float, default=default, metavar="V", help="Coupling strength v"
    )


def add_tau_args(parser, tau_max=10.0, tau_steps=1000):
    group = parser.add_argument_group("Slow-time grid")
    group.add_argument("--tau-max", type=float, default=tau_max, metavar="TAU", help="Final slow time")
    group.add_argument("--tau-steps", type=int, default=tau_steps, metavar="N", help="Number of grid steps")


def add_output_arg(parser, default):
    parser.add_argument(
        "-o",
        "--out",
        default=default,
        metavar="FILE_NAME",
        help=f"Result file relative to the work directory (default: {default})",
    )


def add_seed_arg(parser):
    parser.add_argument("--seed", type=int, default=0, metavar="SEED", help="Master seed of the random draws")


def validate_grid(maximum, steps, name="tau"):
    if not maximum >= 0.0:
        raise ValidationError(f"--{name}-max = {maximum} must be non-negative")
    if steps < 1:
        raise ValidationError(f"--{name}-steps = {steps} must be positive")
    return np.linspace(0.0, maximum, steps + 1)


@dataclass(frozen=True)
class Scenario:
    mode: str
    params: dict
    dos: object = None
    cond: object = None
    overridden: tuple = ()

    @property
    def inert(self):
        used = set(MODE_PARAMETERS.get(self.mode, self.params)) - set(self.overridden)
        if self.params.get("dos") in _DOS_RATE_KEYS:
            used -= set(_DOS_RATE_KEYS.values()) - {_DOS_RATE_KEYS[self.params["dos"]]}
        else:
            used -= set(_DOS_RATE_KEYS.values())
        if self.params.get("init") != "werner":
            used -= {"alpha3", "k"}
        return sorted(key for key in self.params if key not in used)

    def label(self, topology="common"):
        if self.cond is None:
            return None
        return model_name(TOPOLOGY_LETTERS[topology], self.cond)

    def manifest(self, context, events=(), extra=None):
        content = {
            "mode": self.mode,
            "model": self.label(self.params.get("topology", "common")),
            "version": context.version,
            "wall_time_s": round(context.wall_time(), 6),
            "parameters": self.params,
            "inert_parameters": self.inert,
            "events": [{"kind": kind, "tau": tau} for kind, tau in events],
        }
        if self.dos is not None:
            content["environment"] = self.dos.describe()
        if extra:
            content.update(extra)
        return content


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    return value


def build_scenario(mode, args, with_dos=True, with_cond=True, overridden=()):
    """Validate the parsed arguments of ``mode`` before any computation.

    ``overridden`` names parameters the mode replaces per column, recorded as inert.
    """
    params = {
        key: _plain(value)
        for key, value in sorted(vars(args).items())
        if key not in {"func", "config", "log_level", "work_dir", "threads"}
    }
    density = None
    if with_dos:
        density = dos_module.from_spec(args.dos, getattr(args, "gamma", None), getattr(args, "gamma0", None))
    cond = None
    if with_cond:
        cond = initial_condition(args.init, args.alpha, args.alpha3, args.k, args.beta_phase)
    _log.debug("Scenario %s validated: %s", mode, params)
    return Scenario(mode=mode, params=params, dos=density, cond=cond, overridden=tuple(overridden))


def write_results(context, work_dir, out, header, rows, scenario, comments=(), extra=None, events=()):
    """Write the CSV and its manifest, registering both for cleanup on failure."""
    context.outputs.extend([posixpath.join(work_dir, out), posixpath.join(work_dir, manifest_name(out))])
    csv_path = file_write(work_dir, out, csv_text(header, rows, comments))
    manifest_path = file_write(work_dir, manifest_name(out), scenario.manifest(context, events, extra))
    return csv_path, manifest_path
