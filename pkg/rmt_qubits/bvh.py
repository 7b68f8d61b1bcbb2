# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Weak-coupling, long-time channel of two qubits in a common environment.

The block state is evolved in the coordinates (rho11, A1, rho44, A2, A3, rho14):
the population triple (rho11, A1, rho44) is mapped by a 3x3 column-stochastic
matrix, A2 is conserved and the coherences A3, rho14 decay with rotating phases.
All times are slow times tau = v**2 t.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from scipy import optimize

from . import quantifiers
from .dos import one_qubit_markov
from .dos import rates
from .errors import NoStationaryStateError
from .errors import ValidationError
from .states import ABlockCoords
from .states import BlockState
from .states import build_initial
from .states import from_a_coords
from .states import from_blocks
from .states import to_a_coords
from .states import to_blocks

_log = logging.getLogger(__name__)

EVENT_THRESHOLD = 1e-9
EVENT_XTOL = 1e-4
MARKOV_TOL = 1e-10
DET_TOL = 1e-12

P_PLUS = np.diag([1.0, 0.0])
P_MINUS = np.diag([0.0, 1.0])
PI_PLUS = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]])
PI_MINUS = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])


def _ratio(num, den):
    return num / den if den > 0.0 else 0.0


def _decay(rate, tau):
    """exp(-rate * tau), with a zero rate never decaying (also at tau = inf)."""
    if rate == 0.0:
        return 1.0
    return float(np.exp(-rate * tau))


def _loss(rate, tau):
    """1 - exp(-rate * tau), accurate near tau = 0."""
    if rate == 0.0:
        return 0.0
    return float(-np.expm1(-rate * tau))


def _check_tau(tau):
    if not tau >= 0.0:
        raise ValidationError(f"slow time tau = {tau} must be non-negative")


@dataclass(frozen=True)
class BvhChannel:
    rates: object

    @classmethod
    def from_dos(cls, dos, e_env, s=1.0):
        return cls(rates(dos, e_env, s))

    def _population_kernel(self, numerator, alpha, tau):
        r = self.rates
        tilde = r.tilde(alpha)
        bottom = r.gamma0 + r.double(alpha)
        return _ratio(numerator, tilde) * _loss(2.0 * tilde, tau) - _ratio(numerator, bottom) * _decay(
            2.0 * r.base(alpha), tau
        ) * _loss(2.0 * bottom, tau)

    def q_factor(self, alpha, tau):
        """Population kernel q_alpha(tau); vanishes at tau = 0."""
        return self._population_kernel(self.rates.gamma0, alpha, tau)

    def q_scaled(self, alpha, tau):
        """Gamma_{2 alpha} / Gamma_0 * q_alpha(tau), finite when Gamma_0 = 0."""
        return self._population_kernel(self.rates.double(alpha), alpha, tau)

    def matrix(self, tau):
        r = self.rates
        tilde_sum = r.gamma_tilde_sum
        mixing = _loss(2.0 * tilde_sum, tau)
        return np.array(
            [
                [
                    self.q_factor(1, tau) + _decay(2.0 * r.gamma_plus, tau),
                    _ratio(r.gamma_minus, tilde_sum) * mixing,
                    self.q_scaled(-1, tau),
                ],
                [
                    _ratio(r.gamma_plus, r.gamma_tilde_plus) * _loss(2.0 * r.gamma_tilde_plus, tau),
                    1.0 - _ratio(r.gamma_sum, tilde_sum) * mixing,
                    _ratio(r.gamma_minus, r.gamma_tilde_minus) * _loss(2.0 * r.gamma_tilde_minus, tau),
                ],
                [
                    self.q_scaled(1, tau),
                    _ratio(r.gamma_plus, tilde_sum) * mixing,
                    self.q_factor(-1, tau) + _decay(2.0 * r.gamma_minus, tau),
                ],
            ]
        )

    def coherence_factors(self, tau):
        """Multipliers of A3 and rho14 after a slow time tau."""
        r = self.rates
        damping = _decay(r.gamma_sum, tau)
        return damping * np.exp(1j * r.psi_minus * tau), damping * np.exp(1j * r.psi_plus * tau)


def channel_matrix(channel, tau):
    _check_tau(tau)
    return channel.matrix(tau)


def _limit_matrix(channel):
    r = channel.rates
    tilde_sum = r.gamma_tilde_sum
    return np.array(
        [
            [
                _ratio(r.gamma0, r.gamma_tilde_plus),
                _ratio(r.gamma_minus, tilde_sum),
                _ratio(r.gamma_2minus, r.gamma_tilde_minus),
            ],
            [
                _ratio(r.gamma_plus, r.gamma_tilde_plus),
                _ratio(r.gamma0, tilde_sum),
                _ratio(r.gamma_minus, r.gamma_tilde_minus),
            ],
            [
                _ratio(r.gamma_2plus, r.gamma_tilde_plus),
                _ratio(r.gamma_plus, tilde_sum),
                _ratio(r.gamma0, r.gamma_tilde_minus),
            ],
        ]
    )


def evolve(channel, rho0, tau):
    """Evolve a block state by the slow time ``tau``."""
    _check_tau(tau)
    coords = to_a_coords(rho0)
    triple = channel.matrix(tau) @ coords.population_triple()
    a3_factor, rho14_factor = channel.coherence_factors(tau)
    return from_a_coords(
        ABlockCoords(
            rho11=float(triple[0]),
            a1=float(triple[1]),
            rho44=float(triple[2]),
            a2=coords.a2,
            a3=complex(a3_factor * coords.a3),
            rho14=complex(rho14_factor * coords.rho14),
        )
    )


def evolve_direct(channel, rho0, tau):
    """Same evolution assembled from the diagonal and coherence projectors of each block."""
    _check_tau(tau)
    r = channel.rates
    plus = rho0.plus_block
    coords = to_a_coords(rho0)
    populations = {1: plus[0, 0].real, -1: plus[1, 1].real}
    mixing = _loss(2.0 * r.gamma_tilde_sum, tau)

    new_plus = np.zeros((2, 2), dtype=complex)
    for alpha, projector in ((1, P_PLUS), (-1, P_MINUS)):
        weight = (
            (channel.q_factor(alpha, tau) + _decay(2.0 * r.base(alpha), tau)) * populations[alpha]
            + channel.q_scaled(-alpha, tau) * populations[-alpha]
            + _ratio(r.base(-alpha), r.gamma_tilde_sum) * mixing * coords.a1
        )
        new_plus += projector * weight
    a3_factor, rho14_factor = channel.coherence_factors(tau)
    coherence = rho14_factor * plus[0, 1]
    new_plus += np.array([[0.0, coherence], [np.conj(coherence), 0.0]])

    symmetric = sum(
        _ratio(r.base(alpha), r.tilde(alpha)) * _loss(2.0 * r.tilde(alpha), tau) * populations[alpha]
        for alpha in (1, -1)
    )
    symmetric += (1.0 - _ratio(r.gamma_sum, r.gamma_tilde_sum) * mixing) * coords.a1
    a3 = a3_factor * coords.a3
    rotating = np.array([[a3.real, 1j * a3.imag], [-1j * a3.imag, -a3.real]])
    new_minus = PI_PLUS * symmetric + PI_MINUS * coords.a2 + rotating
    return BlockState(plus_block=new_plus, minus_block=new_minus)


def _require_stationary(channel):
    r = channel.rates
    if not (r.gamma_plus > 0.0 and r.gamma_minus > 0.0):
        raise NoStationaryStateError(
            f"decay rates Gamma+ = {r.gamma_plus:.6g}, Gamma- = {r.gamma_minus:.6g} must both be positive"
        )


def stationary(channel, rho0):
    """Large-time limit of :func:`evolve`; A2 is carried over unchanged."""
    _require_stationary(channel)
    coords = to_a_coords(rho0)
    triple = _limit_matrix(channel) @ coords.population_triple()
    return from_a_coords(
        ABlockCoords(
            rho11=float(triple[0]),
            a1=float(triple[1]),
            rho44=float(triple[2]),
            a2=coords.a2,
            a3=0j,
            rho14=0j,
        )
    )


def relaxation_time(channel):
    """Slowest relaxation time of the channel, 1 / min of the positive decay rates."""
    r = channel.rates
    candidates = (r.gamma_plus, r.gamma_minus, r.gamma0 + r.gamma_2plus, r.gamma0 + r.gamma_2minus)
    positive = [rate for rate in candidates if rate > 0.0]
    return 1.0 / min(positive) if positive else 1.0


def markov_diagnostic(channel, grid_points=20, tau_max=None):
    if tau_max is None:
        tau_max = 2.0 * relaxation_time(channel)
    taus = np.linspace(0.0, tau_max, grid_points)
    matrices = [channel.matrix(tau) for tau in taus]
    residual = 0.0
    for i, tau in enumerate(taus):
        for j, tau1 in enumerate(taus):
            combined = channel.matrix(tau + tau1)
            residual = max(residual, float(np.max(np.abs(combined - matrices[i] @ matrices[j]))))

    five = channel.rates.five()
    is_flat = bool(np.allclose(five, five[0], rtol=1e-12, atol=0.0))
    det_inf = float(np.linalg.det(_limit_matrix(channel)))
    result = {
        "det_phi3_inf": det_inf,
        "max_semigroup_residual": residual,
        "is_flat": is_flat,
        "markovian": residual <= MARKOV_TOL,
        "one_qubit_markovian": one_qubit_markov(channel.rates)["markovian"],
    }
    _log.debug("Markov diagnostic over tau in [0, %g]: %s", tau_max, result)
    return result


@dataclass(frozen=True, eq=False)
class Trajectory:
    taus: np.ndarray
    states: list
    reports: list
    events: list = field(default_factory=list)

    def __post_init__(self):
        if not len(self.taus) == len(self.states) == len(self.reports):
            raise ValidationError("trajectory grid, states and reports differ in length")

    def final(self):
        return self.states[-1], self.reports[-1]


def _check_grid(taus):
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or taus.size == 0:
        raise ValidationError("tau grid must be a non-empty one-dimensional sequence")
    if taus[0] < 0.0 or np.any(np.diff(taus) <= 0.0):
        raise ValidationError("tau grid must be ascending and non-negative")
    return taus


def _event_margin(channel, rho0, tau):
    state = from_blocks(evolve(channel, rho0, tau))
    return max(quantifiers.concurrence_branches(state)) - 0.5 * EVENT_THRESHOLD


def find_events(channel, rho0, taus):
    """Sudden death and birth times of the concurrence, refined to EVENT_XTOL."""
    margins = [_event_margin(channel, rho0, tau) for tau in taus]
    events = []
    for left, right, m_left, m_right in zip(taus, taus[1:], margins, margins[1:]):
        alive_left = m_left > 0.0
        if alive_left == (m_right > 0.0):
            continue
        if m_right == 0.0:
            crossing = float(right)
        else:
            crossing = optimize.brentq(
                lambda tau: _event_margin(channel, rho0, tau), left, right, xtol=EVENT_XTOL
            )
        events.append(("ESD" if alive_left else "ESB", float(crossing)))
    return events


def trajectory(channel, cond, taus, threads=1, discord_method="auto"):
    taus = _check_grid(taus)
    rho0 = to_blocks(build_initial(cond))

    def point(tau):
        state = from_blocks(evolve(channel, rho0, tau))
        return state, quantifiers.report(state, discord_method=discord_method)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(point, taus))
    else:
        results = [point(tau) for tau in taus]

    events = find_events(channel, rho0, taus)
    for kind, tau in events:
        _log.info("%s at tau=%.6g", kind, tau)
    return Trajectory(
        taus=taus,
        states=[state for state, _report in results],
        reports=[item for _state, item in results],
        events=events,
    )


def stationary_state(channel, cond):
    """Stationary two-qubit state reached from an initial condition."""
    return from_blocks(stationary(channel, to_blocks(build_initial(cond))))


def state_at(channel, cond, tau):
    return from_blocks(evolve(channel, to_blocks(build_initial(cond)), tau))

