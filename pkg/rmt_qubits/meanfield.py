# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Self-consistent resolvent pair of the two-qubit common-environment model.

For a block sign eta the diagonal qubit term is h_eta sigma_z with h_+ = 2s and
h_- = 0. The pair (g_plus, g_minus) solves

    g_eta(z) = int 2 (E - z) nu0(E) dE / (E**2 - z**2 - h_eta**2 - 2 (E - z) Z_{-eta}(z)),
    Z_eta(z) = z + v**2 g_eta(z),

and each E-integral is reduced to Stieltjes transforms of nu0 by partial fractions.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import optimize

from .dos import Flat
from .errors import SingularResolventError
from .errors import SolverError
from .errors import ValidationError

_log = logging.getLogger(__name__)

IMAG_FLOOR = 1e-6
IMAG_WARN = 1e-3
DAMPING = 0.5
STEP_TOL = 1e-12
RESIDUAL_TOL = 1e-10
MAX_ITERATIONS = 5000
OSCILLATION_WINDOW = 50

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
IDENTITY = np.eye(2)


def diagonal_shift(s, eta):
    return s * (1 + eta)


@dataclass(frozen=True)
class ResolventSample:
    z: complex
    g_plus: complex
    g_minus: complex
    v: float
    s: float
    iterations: int = 0
    residual: float = 0.0
    method: str = "fixed-point"

    def g(self, eta):
        return self.g_plus if eta > 0 else self.g_minus

    def big_z(self, eta):
        """Z_eta(z) = z + v**2 g_eta(z)."""
        return self.z + self.v**2 * self.g(eta)


def block_integral(dos, z, shift, big_z):
    """int 2 (E - z) nu0(E) / (E**2 - z**2 - shift**2 - 2 (E - z) big_z) dE."""
    if shift == 0.0:
        return 2.0 * dos.stieltjes(2.0 * big_z - z)
    root = np.sqrt((big_z - z) ** 2 + shift**2)
    if abs(root) == 0.0:
        raise SingularResolventError(f"double pole of the block integrand at z = {z}")
    first, second = big_z + root, big_z - root
    weight_first = 2.0 * (first - z) / (first - second)
    weight_second = 2.0 * (second - z) / (second - first)
    return weight_first * dos.stieltjes(first) + weight_second * dos.stieltjes(second)


def _update(dos, s, v, z, pair):
    g_plus, g_minus = pair
    return np.array(
        [
            block_integral(dos, z, diagonal_shift(s, 1), z + v * v * g_minus),
            block_integral(dos, z, diagonal_shift(s, -1), z + v * v * g_plus),
        ]
    )


def _check_arguments(dos, z):
    if isinstance(dos, Flat):
        raise ValidationError("the self-consistent resolvent needs a normalizable density of states")
    z = complex(z)
    if abs(z.imag) < IMAG_FLOOR:
        raise ValidationError(f"|Im z| = {abs(z.imag):.3e} is below the floor {IMAG_FLOOR:g}")
    if abs(z.imag) < IMAG_WARN:
        _log.warning("Im z = %.3e is small, the resolvent pair is poorly conditioned", z.imag)
    return z


def _fixed_point(dos, s, v, z, start):
    pair = np.array(start, dtype=complex)
    best = np.inf
    stalled = 0
    for iteration in range(1, MAX_ITERATIONS + 1):
        proposal = _update(dos, s, v, z, pair)
        step = float(np.max(np.abs(proposal - pair)))
        pair = (1.0 - DAMPING) * pair + DAMPING * proposal
        if step < STEP_TOL:
            return pair, iteration
        if step < best:
            best = step
            stalled = 0
        else:
            stalled += 1
        if stalled >= OSCILLATION_WINDOW:
            _log.debug("Fixed-point iteration stalled at step %.3e after %d iterations", step, iteration)
            return None, iteration
    return None, MAX_ITERATIONS


def _root(dos, s, v, z, start):
    def residual(x):
        pair = x[:2] + 1j * x[2:]
        diff = _update(dos, s, v, z, pair) - pair
        return np.concatenate([diff.real, diff.imag])

    start = np.asarray(start, dtype=complex)
    result = optimize.root(residual, np.concatenate([start.real, start.imag]), method="hybr", tol=1e-15)
    return result.x[:2] + 1j * result.x[2:], int(result.nfev)


def solve_selfconsistent(dos, s, v, z, method="fixed-point", initial=None):
    """Solve for the resolvent pair at a non-real spectral parameter ``z``.

    Parameters
    ----------
    dos : Lorentzian or Tabulated
    s, v : float
        Qubit splitting and coupling.
    z : complex
    method : {"fixed-point", "root"}
        ``fixed-point`` iterates with damping 0.5 from the decoupled solution and
        falls back to ``root`` when the iteration stalls.
    initial : pair of complex, optional
        Warm start, e.g. the solution at a neighbouring ``z``.
    """
    z = _check_arguments(dos, z)
    start = _update(dos, s, 0.0, z, (0j, 0j)) if initial is None else np.asarray(initial, dtype=complex)

    pair, iterations, used = None, 0, method
    if method == "fixed-point":
        pair, iterations = _fixed_point(dos, s, v, z, start)
        if pair is None:
            _log.info("Falling back to root finding at z = %s", z)
            used = "root"
    elif method != "root":
        raise ValidationError(f"unknown solver method '{method}'")
    if pair is None:
        pair, iterations = _root(dos, s, v, z, start)

    residual = float(np.max(np.abs(_update(dos, s, v, z, pair) - pair)))
    if not residual <= RESIDUAL_TOL:
        raise SolverError(f"resolvent pair at z = {z} not converged", residual, iterations)
    if not np.all(pair.imag * z.imag > 0.0):
        raise SolverError(f"resolvent pair at z = {z} has the wrong imaginary sign", residual, iterations)
    _log.debug("Resolvent pair at z = %s after %d iterations (%s)", z, iterations, used)
    return ResolventSample(
        z=z,
        g_plus=complex(pair[0]),
        g_minus=complex(pair[1]),
        v=float(v),
        s=float(s),
        iterations=iterations,
        residual=residual,
        method=used,
    )


def block_resolvent(sample, e):
    """The 2x2 resolvent blocks (G_plus, G_minus) at environment energy ``e``."""
    z = sample.z
    blocks = []
    for eta in (1, -1):
        shift = diagonal_shift(sample.s, eta)
        other = sample.big_z(-eta)
        denominator = e * e - z * z - shift**2 - 2.0 * (e - z) * other
        if abs(denominator) < 1e-300:
            raise SingularResolventError(f"resolvent block {eta:+d} is singular at E = {e}, z = {z}")
        numerator = (e - other) * IDENTITY + (other - z) * SIGMA_X - shift * SIGMA_Z
        blocks.append(numerator / denominator)
    return blocks[0], blocks[1]


def block_trace(matrix):
    """Tr A (1 + sigma_x)."""
    return complex(np.trace(matrix @ (IDENTITY + SIGMA_X)))


def resolvent_integral(sample, dos, eta, limit=400):
    """Quadrature of block_trace(G_eta(E, z)) nu0(E) over the real line."""

    def part(e, take):
        value = block_trace(block_resolvent(sample, e)[0 if eta > 0 else 1]) * dos.eval(e)
        return float(take(value))

    options = {"limit": limit, "epsabs": 1e-12, "epsrel": 1e-11}
    total = 0j
    for lower, upper in ((-np.inf, 0.0), (0.0, np.inf)):
        real, _err = integrate.quad(part, lower, upper, args=(np.real,), **options)
        imag, _err = integrate.quad(part, lower, upper, args=(np.imag,), **options)
        total += real + 1j * imag
    return total


def limiting_dos_probe(dos, s, v, e_grid, eta=None, epsilon=IMAG_WARN):
    """(1/pi) Im g_eta(x + i epsilon) over ``e_grid``; averaged over eta when ``eta`` is None."""
    values = []
    warm = None
    for x in np.asarray(e_grid, dtype=float):
        sample = solve_selfconsistent(dos, s, v, complex(x, epsilon), initial=warm)
        warm = (sample.g_plus, sample.g_minus)
        if eta is None:
            value = 0.5 * (sample.g_plus.imag + sample.g_minus.imag)
        else:
            value = sample.g(eta).imag
        values.append(value / np.pi)
    return np.array(values)
