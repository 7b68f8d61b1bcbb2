# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Finite-N Monte Carlo oracle.

Two qubits with splitting s couple through sigma_x to a random environment
``M + W`` where ``M`` is diagonal with a prescribed spectrum and ``W`` is a GUE
matrix. Evolution is exact, by dense Hermitian eigendecomposition. The environment
starts in the eigenvector of ``M`` closest to the target energy.

Three topologies are supported: ``common`` (both qubits share one environment),
``independent`` (each qubit has its own, with independent couplings) and
``free`` (qubit A is uncoupled). The last two factorize into single-qubit
channels, so no matrix larger than 2N x 2N is formed for them.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from scipy import stats

from . import quantifiers
from .bvh import BvhChannel
from .bvh import evolve
from .errors import ResourceBudgetError
from .errors import TopologyMismatchError
from .errors import ValidationError
from .states import MINUS_INDICES
from .states import PLUS_INDICES
from .states import X_MASK
from .states import TwoQubitState
from .states import build_initial
from .states import from_blocks
from .states import to_a_coords
from .states import to_blocks

_log = logging.getLogger(__name__)

TOPOLOGIES = ("common", "independent", "free")
DEFAULT_BUDGET = 2 * 1024**3
BVH_MAX_COUPLING = 0.3

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
# (sigma_z x sigma_z) flips the sign of every coupling term
PARITY = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True, eq=False)
class FiniteNModel:
    n: int
    s: float
    v: float
    topology: str
    env_spectrum: np.ndarray
    target_energy: float
    seed: int
    s_b: float | None = None
    v_b: float | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError(f"environment dimension n = {self.n} must be at least 2")
        if self.topology not in TOPOLOGIES:
            raise ValidationError(f"unknown topology '{self.topology}', expected one of {TOPOLOGIES}")
        if self.seed < 0:
            raise ValidationError(f"seed = {self.seed} must be non-negative")
        spectrum = np.sort(np.asarray(self.env_spectrum, dtype=float))
        if spectrum.shape != (self.n,):
            raise ValidationError(f"environment spectrum has {spectrum.size} values, expected {self.n}")
        spectrum.setflags(write=False)
        object.__setattr__(self, "env_spectrum", spectrum)

    @classmethod
    def from_dos(
        cls, dos, n, s, v, topology="common", target_energy=0.0, seed=0, spectrum="quantile", **kwargs
    ):
        if spectrum == "quantile":
            values = quantile_spectrum(dos, n)
        elif spectrum == "sample":
            values = sample_spectrum(dos, n, np.random.default_rng([seed, 2**32 - 1]))
        else:
            raise ValidationError(f"unknown spectrum mode '{spectrum}'")
        return cls(n, s, v, topology, values, target_energy, seed, **kwargs)

    @property
    def splitting_b(self):
        return self.s if self.s_b is None else self.s_b

    @property
    def coupling_b(self):
        return self.v if self.v_b is None else self.v_b

    @property
    def identical(self):
        return self.splitting_b == self.s and self.coupling_b == self.v

    def target_index(self):
        # argmin picks the lower index on ties
        return int(np.argmin(np.abs(self.env_spectrum - self.target_energy)))

    def ks_distance(self, dos):
        return float(stats.kstest(self.env_spectrum, dos.cdf).statistic)

    def system_energies(self):
        signs = np.array([1.0, -1.0])
        return (self.s * signs[:, None] + self.splitting_b * signs[None, :]).reshape(4)

    def describe(self):
        return {
            "n": self.n,
            "s": self.s,
            "v": self.v,
            "s_b": self.splitting_b,
            "v_b": self.coupling_b,
            "topology": self.topology,
            "target_energy": self.target_energy,
            "target_level": float(self.env_spectrum[self.target_index()]),
            "seed": self.seed,
        }


def quantile_spectrum(dos, n):
    """Deterministic spectrum at the midpoint quantiles of nu0."""
    return np.asarray(dos.ppf((np.arange(n) + 0.5) / n), dtype=float)


def sample_spectrum(dos, n, rng):
    return np.sort(np.asarray(dos.ppf(rng.random(n)), dtype=float))


def sample_gue(n, seed):
    """Hermitian W with E|W_jk|**2 = 1/n off the diagonal and E W_jj**2 = 2/n.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts, including a
    generator, which is then advanced.
    """
    if n < 2:
        raise ValidationError(f"GUE dimension n = {n} must be at least 2")
    rng = np.random.default_rng(seed)
    diagonal = rng.normal(scale=np.sqrt(2.0 / n), size=n)
    parts = rng.normal(scale=np.sqrt(0.5 / n), size=(2, n, n))
    upper = np.triu(parts[0] + 1j * parts[1], 1)
    return upper + upper.conj().T + np.diag(diagonal)


def draw_rng(model, draw):
    return np.random.default_rng([model.seed, draw])


def _check_budget(model, dim):
    # matrix, eigenvectors and one work copy
    needed = 3 * dim * dim * np.dtype(complex).itemsize
    if needed > model.budget:
        raise ResourceBudgetError(
            f"dense {dim}x{dim} diagonalization needs about {needed / 1024**3:.2f} GiB,"
            f" budget is {model.budget / 1024**3:.2f} GiB"
        )


@dataclass(frozen=True)
class SplitHamiltonian:
    """Single-qubit Hamiltonians of the two factors; ``a`` is 2x2 when qubit A is free."""

    a: np.ndarray
    b: np.ndarray


def _single_qubit_hamiltonian(model, splitting, coupling, w):
    env = np.diag(model.env_spectrum).astype(complex)
    return (
        np.kron(splitting * SIGMA_Z, np.eye(model.n))
        + np.kron(np.eye(2), env)
        + np.kron(coupling * SIGMA_X, w)
    )


def build_hamiltonian(model, draw=0):
    """Dense Hamiltonian of one coupling draw.

    ``common`` returns the 4N x 4N matrix with the system index outermost. The
    factorizing topologies return a :class:`SplitHamiltonian`.
    """
    rng = draw_rng(model, draw)
    if model.topology == "common":
        _check_budget(model, 4 * model.n)
        w = sample_gue(model.n, rng)
        h_s = np.diag(model.system_energies()).astype(complex)
        q_s = model.v * np.kron(SIGMA_X, np.eye(2)) + model.coupling_b * np.kron(np.eye(2), SIGMA_X)
        return (
            np.kron(h_s, np.eye(model.n))
            + np.kron(np.eye(4), np.diag(model.env_spectrum))
            + np.kron(q_s, w)
        )

    _check_budget(model, 2 * model.n)
    if model.topology == "independent":
        w_a = sample_gue(model.n, rng)
        w_b = sample_gue(model.n, rng)
        h_a = _single_qubit_hamiltonian(model, model.s, model.v, w_a)
    else:
        w_b = sample_gue(model.n, rng)
        h_a = model.s * SIGMA_Z
    h_b = _single_qubit_hamiltonian(model, model.splitting_b, model.coupling_b, w_b)
    return SplitHamiltonian(a=h_a, b=h_b)


def _propagated_columns(hamiltonian, columns, times):
    """U(t)[:, columns] for every t, from one eigendecomposition."""
    energies, vectors = np.linalg.eigh(hamiltonian)
    overlap = vectors.conj().T[:, columns]
    for t in times:
        yield vectors @ (np.exp(-1j * energies * t)[:, None] * overlap)


def _check_times(times):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0.0):
        raise ValidationError("evolution times must be non-negative")
    return times


def _common_states(model, hamiltonian, rho0, times):
    n, k = model.n, model.target_index()
    columns = [a * n + k for a in range(4)]
    states = []
    for block in _propagated_columns(hamiltonian, columns, times):
        amplitudes = block.reshape(4, n, 4)
        states.append(np.einsum("iea,ab,jeb->ij", amplitudes, rho0, amplitudes.conj()))
    return states


def _single_qubit_kraus(model, hamiltonian, times):
    """Kraus tensors K[i, e, a] of a single-qubit channel for every t."""
    if hamiltonian.shape == (2, 2):
        energies = np.diag(hamiltonian).real
        return [np.diag(np.exp(-1j * energies * t)).reshape(2, 1, 2) for t in times]
    n, k = model.n, model.target_index()
    return [block.reshape(2, n, 2) for block in _propagated_columns(hamiltonian, [k, n + k], times)]


def _factorized_states(model, split, rho0, times):
    tensor = rho0.reshape(2, 2, 2, 2)
    states = []
    channels = zip(_single_qubit_kraus(model, split.a, times), _single_qubit_kraus(model, split.b, times))
    for kraus_a, kraus_b in channels:
        super_a = np.einsum("iea,kec->iakc", kraus_a, kraus_a.conj())
        super_b = np.einsum("jfb,lfd->jbld", kraus_b, kraus_b.conj())
        evolved = np.einsum("iakc,jbld,abcd->ijkl", super_a, super_b, tensor)
        states.append(evolved.reshape(4, 4))
    return states


def _raw_states(model, rho0, times, draw):
    hamiltonian = build_hamiltonian(model, draw)
    if model.topology == "common":
        return _common_states(model, hamiltonian, rho0, times)
    return _factorized_states(model, hamiltonian, rho0, times)


def reduced_states(model, cond, times, draw=0):
    """Reduced two-qubit states of one coupling draw at every time in ``times``."""
    times = _check_times(times)
    rho0 = build_initial(cond).entries
    return [TwoQubitState.from_numeric(state) for state in _raw_states(model, rho0, times, draw)]


def reduced_state(model, cond, t, draw=0):
    return reduced_states(model, cond, [t], draw)[0]


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    mean_state: TwoQubitState
    entry_variances: np.ndarray
    stderr: np.ndarray
    draws: int
    time: float
    samples: int = field(default=0)

    def max_variance(self):
        return float(np.max(self.entry_variances))


def _draw_samples(model, rho0, times, draw, antithetic, x_initial):
    states = _raw_states(model, rho0, times, draw)
    if not antithetic:
        return [[state] for state in states]
    if x_initial:
        partners = [PARITY[:, None] * state * PARITY[None, :] for state in states]
    else:
        flipped = PARITY[:, None] * rho0 * PARITY[None, :]
        partners = [
            PARITY[:, None] * state * PARITY[None, :] for state in _raw_states(model, flipped, times, draw)
        ]
    return [[state, partner] for state, partner in zip(states, partners)]


def ensemble_series(model, cond, draws, times, antithetic=True, threads=1):
    """Sample mean and per-entry variance of the reduced state over coupling draws.

    With ``antithetic`` every draw W is paired with -W; the pair mean is then
    exactly X-form for X-form initial states. The two members of a pair are
    correlated, so error bars come from the pair means and the single-sample
    entry variance is estimated as the pooled spread plus the squared standard
    error, which is unbiased for pairs and reduces to the usual n - 1 estimate
    for independent draws.
    """
    if draws < 2:
        raise ValidationError(f"draws = {draws} must be at least 2")
    times = _check_times(times)
    initial = build_initial(cond)
    rho0 = initial.entries
    x_initial = initial.is_x_form()

    def run(draw):
        return _draw_samples(model, rho0, times, draw, antithetic, x_initial)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_draw = list(pool.map(run, range(draws)))
    else:
        per_draw = [run(draw) for draw in range(draws)]

    results = []
    for index, t in enumerate(times):
        # shape (draws, pair, 4, 4)
        samples = np.array([draw_samples[index] for draw_samples in per_draw])
        flat = samples.reshape(-1, 4, 4)
        mean = flat.mean(axis=0)
        unit_means = samples.mean(axis=1)
        spread = np.mean(np.abs(unit_means - mean) ** 2, axis=0) * draws / (draws - 1)
        stderr = np.sqrt(spread / draws)
        # pooled spread around the mean plus the variance of the mean itself
        variances = np.mean(np.abs(flat - mean) ** 2, axis=0) + stderr**2
        if not np.any(stderr > 0.0) and model.v != 0.0:
            _log.warning("Monte Carlo error bars vanish at t=%g with nonzero coupling", t)
        results.append(
            EnsembleStats(
                mean_state=TwoQubitState.from_numeric(mean),
                entry_variances=variances,
                stderr=stderr,
                draws=draws,
                time=float(t),
                samples=flat.shape[0],
            )
        )
    return results


def ensemble(model, cond, draws, t, antithetic=True, threads=1):
    return ensemble_series(model, cond, draws, [t], antithetic, threads)[0]


def variance_bound(model, t):
    """Self-averaging bound 4**4 (v_A + v_B)**2 t**2 / N on the entry variances."""
    return 4.0**4 * (model.v + model.coupling_b) ** 2 * t * t / model.n


def variance_scan(dos, n_list, s, v, cond, draws, t, target_energy=0.0, seed=0, topology="common", threads=1):
    """Largest entry variance per N and the fitted exponent p of variance ~ N**-p."""
    rows = []
    for n in n_list:
        model = FiniteNModel.from_dos(dos, n, s, v, topology, target_energy, seed)
        stats_n = ensemble(model, cond, draws, t, antithetic=False, threads=threads)
        rows.append(
            {
                "n": n,
                "max_variance": stats_n.max_variance(),
                "bound": variance_bound(model, t),
            }
        )
        _log.info("N=%d: max entry variance %.6g", n, rows[-1]["max_variance"])
    sizes = np.log([row["n"] for row in rows])
    variances = np.log([row["max_variance"] for row in rows])
    slope, _intercept = np.polyfit(sizes, variances, 1)
    return {"rows": rows, "exponent": float(-slope)}


def interaction_picture(model, state, t):
    """Conjugate by exp(+i t H_S) to undo the free qubit rotation."""
    phases = np.exp(1j * model.system_energies() * t)
    return phases[:, None] * state.entries * phases.conj()[None, :]


def picture_invariants(state):
    """Populations, |coherences| and the four quantifiers of an X-state."""
    coords = to_a_coords(to_blocks(state))
    report = quantifiers.report(state)
    return np.array(
        [
            coords.rho11,
            coords.rho44,
            coords.a1,
            coords.a2,
            abs(coords.rho14),
            abs(coords.a3),
            *report.as_tuple(),
        ]
    )


def bvh_compare(model, cond, draws, taus, dos, antithetic=True, threads=1):
    """Deviation of the ensemble mean at t = tau / v**2 from the weak-coupling channel."""
    if model.topology != "common":
        raise TopologyMismatchError(
            f"the weak-coupling channel describes the common topology, not '{model.topology}'"
        )
    if not model.identical:
        raise TopologyMismatchError("the weak-coupling channel needs identical qubits")
    if not 0.0 < model.v <= BVH_MAX_COUPLING:
        raise ValidationError(
            f"coupling v = {model.v} outside the weak-coupling range (0, {BVH_MAX_COUPLING}]"
        )
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    channel = BvhChannel.from_dos(dos, model.target_energy, model.s)
    rho0 = to_blocks(build_initial(cond))
    times = taus / model.v**2
    series = ensemble_series(model, cond, draws, times, antithetic, threads)

    rows = []
    for tau, t, stats_t in zip(taus, times, series):
        predicted = from_blocks(evolve(channel, rho0, tau))
        difference = picture_invariants(stats_t.mean_state) - picture_invariants(predicted)
        invariant = float(np.max(np.abs(difference)))
        aligned = interaction_picture(model, stats_t.mean_state, t)
        entrywise = float(np.max(np.abs(np.where(X_MASK, aligned, 0.0) - predicted.entries)))
        rows.append(
            {
                "tau": float(tau),
                "t": float(t),
                "invariant_deviation": invariant,
                "entry_deviation": entrywise,
                "max_stderr": float(np.max(stats_t.stderr)),
            }
        )
    return {
        "rows": rows,
        "max_invariant_deviation": max(row["invariant_deviation"] for row in rows),
        "max_entry_deviation": max(row["entry_deviation"] for row in rows),
        "picture": "interaction, exp(+i t H_S)",
    }


def coupling_scan(dos, n, s, couplings, cond, draws, taus, target_energy=0.0, seed=0, threads=1, **kwargs):
    """Run bvh_compare for every coupling in ``couplings``.

    Returns the per-coupling results, a summary ordered by v and whether the
    largest invariant deviation shrinks with v.
    """
    couplings = [float(v) for v in couplings]
    if not couplings:
        raise ValidationError("no couplings to compare")
    results = {}
    for v in couplings:
        model = FiniteNModel.from_dos(dos, n, s, v, "common", target_energy, seed, **kwargs)
        results[v] = bvh_compare(model, cond, draws, taus, dos, threads=threads)
        _log.info("v=%g: max invariant deviation %.4g", v, results[v]["max_invariant_deviation"])
    summary = [
        {
            "v": v,
            "max_invariant_deviation": results[v]["max_invariant_deviation"],
            "max_entry_deviation": results[v]["max_entry_deviation"],
        }
        for v in sorted(results)
    ]
    deviations = [item["max_invariant_deviation"] for item in summary]
    monotone = all(low <= high for low, high in zip(deviations, deviations[1:]))
    return {"results": results, "summary": summary, "monotone_in_v": monotone}


def resolvent_trace(model, z, draw=0):
    """Block traces of N**-1 Tr_E (H - z)**-1 for one draw, as (g_plus, g_minus)."""
    if model.topology != "common":
        raise TopologyMismatchError("resolvent traces are defined for the common topology")
    z = complex(z)
    if z.imag == 0.0:
        raise ValidationError("the resolvent needs a non-real spectral parameter")
    hamiltonian = build_hamiltonian(model, draw)
    energies, vectors = np.linalg.eigh(hamiltonian)
    amplitudes = vectors.reshape(4, model.n, -1)
    system = np.einsum("iem,jem,m->ij", amplitudes, amplitudes.conj(), 1.0 / (energies - z)) / model.n
    traces = []
    for indices in (PLUS_INDICES, MINUS_INDICES):
        block = system[np.ix_(indices, indices)]
        traces.append(complex(np.trace(block) + block[0, 1] + block[1, 0]))
    return traces[0], traces[1]
