# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Negativity, concurrence, von Neumann entropy and quantum discord of two-qubit states.

Logarithms are base 2 throughout.
"""

import logging
from dataclasses import astuple
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import InvalidStateError
from .errors import ValidationError
from .states import PSD_TOL

_log = logging.getLogger(__name__)

DISCORD_CLIP = 1e-9
GRID_POINTS = 64
THETA_SCAN = 181

REPORT_FIELDS = ("negativity", "concurrence", "discord", "entropy")


@dataclass(frozen=True)
class QuantifierReport:
    negativity: float
    concurrence: float
    entropy: float
    discord: float

    def as_row(self):
        return [getattr(self, name) for name in REPORT_FIELDS]

    def as_tuple(self):
        return astuple(self)


def _x_entries(state):
    state.require_x_form()
    rho = state.entries
    return (
        rho[0, 0].real,
        rho[1, 1].real,
        rho[2, 2].real,
        rho[3, 3].real,
        abs(rho[1, 2]),
        abs(rho[0, 3]),
    )


def _negative_eigenvalue(outer_a, outer_b, coherence):
    """Twice the negative eigenvalue of a transposed block, without cancellation."""
    spread = np.sqrt((outer_a - outer_b) ** 2 + 4.0 * coherence**2)
    gap = 4.0 * (coherence**2 - outer_a * outer_b)
    denominator = outer_a + outer_b + spread
    if gap <= 0.0 or denominator <= 0.0:
        return 0.0
    return float(gap / denominator)


def negativity(state):
    rho11, rho22, rho33, rho44, abs23, abs14 = _x_entries(state)
    return _negative_eigenvalue(rho11, rho44, abs23) + _negative_eigenvalue(rho22, rho33, abs14)


def concurrence_branches(state):
    """Unclipped (C1, C2); the concurrence is twice the larger one if positive."""
    rho11, rho22, rho33, rho44, abs23, abs14 = _x_entries(state)
    first = abs23 - np.sqrt(max(0.0, rho11 * rho44))
    second = abs14 - np.sqrt(max(0.0, rho22 * rho33))
    return float(first), float(second)


def concurrence(state):
    return 2.0 * max(0.0, *concurrence_branches(state))


def x_eigenvalues(state):
    """Closed-form spectrum of an X-state, one eigenvalue per block sign."""
    rho11, rho22, rho33, rho44, abs23, abs14 = _x_entries(state)
    outer = np.sqrt((rho11 - rho44) ** 2 + 4.0 * abs14**2)
    inner = np.sqrt((rho22 - rho33) ** 2 + 4.0 * abs23**2)
    return np.array(
        [
            0.5 * (rho11 + rho44 + outer),
            0.5 * (rho22 + rho33 + inner),
            0.5 * (rho22 + rho33 - inner),
            0.5 * (rho11 + rho44 - outer),
        ]
    )


def shannon_bits(values):
    values = np.asarray(values, dtype=float)
    if np.any(values < -PSD_TOL):
        raise InvalidStateError(f"negative eigenvalue {values.min():.3e}")
    positive = values[values > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def entropy(state, closed_form=True):
    if closed_form and state.is_x_form():
        return shannon_bits(x_eigenvalues(state))
    return shannon_bits(state.eigenvalues())


def _measurement_vectors(theta, phi):
    """Orthonormal pair of measurement vectors for Bloch angles (theta, phi)."""
    cos = np.cos(0.5 * np.asarray(theta))
    sin = np.sin(0.5 * np.asarray(theta))
    phase = np.exp(1j * np.asarray(phi))
    first = np.stack([cos + 0j, phase * sin], axis=-1)
    second = np.stack([sin + 0j, -phase * cos], axis=-1)
    return first, second


def _unnormalized_entropy(blocks):
    """Sum over outcomes of -mu log2(mu / p) for the conditional blocks."""
    mu = np.clip(np.linalg.eigvalsh(blocks), 0.0, None)
    weight = mu.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mu > 0.0, -mu * np.log2(mu / weight), 0.0)
    return terms.sum(axis=-1)


def _conditional_entropy(tensor, theta, phi):
    total = 0.0
    for vector in _measurement_vectors(theta, phi):
        blocks = np.einsum("...b,abcd,...d->...ac", vector.conj(), tensor, vector)
        blocks = 0.5 * (blocks + np.swapaxes(blocks, -1, -2).conj())
        total = total + _unnormalized_entropy(blocks)
    return total


def _full_search(tensor):
    thetas = np.linspace(0.0, np.pi, GRID_POINTS)
    phis = np.linspace(0.0, 2.0 * np.pi, GRID_POINTS, endpoint=False)
    theta_grid, phi_grid = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(tensor, theta_grid, phi_grid)
    best = np.unravel_index(int(np.argmin(values)), values.shape)
    start = np.array([theta_grid[best], phi_grid[best]])

    result = optimize.minimize(
        lambda angles: float(_conditional_entropy(tensor, angles[0], angles[1])),
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-10},
    )
    _log.debug("Discord simplex refinement took %d evaluations", result.nfev)
    return min(float(values[best]), float(result.fun))


def _x_fast_search(tensor, rho):
    phi = 0.5 * (np.angle(rho[1, 2]) - np.angle(rho[0, 3]))
    thetas = np.linspace(0.0, np.pi, THETA_SCAN)
    values = _conditional_entropy(tensor, thetas, np.full_like(thetas, phi))
    index = int(np.argmin(values))
    step = thetas[1] - thetas[0]
    result = optimize.minimize_scalar(
        lambda theta: float(_conditional_entropy(tensor, theta, phi)),
        bounds=(max(0.0, thetas[index] - step), min(np.pi, thetas[index] + step)),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return min(float(values[index]), float(result.fun))


def discord(state, side="B", method="auto"):
    """One-sided quantum discord with a projective measurement on ``side``.

    Parameters
    ----------
    state : TwoQubitState
    side : {"B", "A"}
        Measured qubit.
    method : {"auto", "full", "x-fast"}
        ``full`` scans a 64x64 grid of Bloch angles and refines with Nelder-Mead.
        ``x-fast`` fixes the azimuth that maximizes the conditional coherence of
        an X-state and searches the polar angle only. ``auto`` picks ``x-fast``
        for X-states.
    """
    if side == "A":
        state = state.swap_qubits()
    elif side != "B":
        raise ValidationError(f"unknown measurement side '{side}'")
    if method == "auto":
        method = "x-fast" if state.is_x_form() else "full"

    rho = state.entries
    tensor = rho.reshape(2, 2, 2, 2)
    if method == "full":
        conditional = _full_search(tensor)
    elif method == "x-fast":
        state.require_x_form()
        conditional = _x_fast_search(tensor, rho)
    else:
        raise ValidationError(f"unknown discord method '{method}'")

    value = shannon_bits(np.linalg.eigvalsh(state.partial_trace("B"))) - entropy(state) + conditional
    if value < -DISCORD_CLIP:
        _log.warning("Discord minimizer returned %.3e, clipped to zero", value)
    return max(0.0, value)


def report(state, discord_method="auto"):
    return QuantifierReport(
        negativity=negativity(state),
        concurrence=concurrence(state),
        entropy=entropy(state),
        discord=discord(state, method=discord_method),
    )
