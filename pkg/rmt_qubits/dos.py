# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Environment density of states, decay rates and principal-value phases.

Three variants are supported: a Lorentzian density, a locally flat density given
by its constant rate, and a tabulated density interpolated linearly between grid
points. The rates and phases parametrize the weak-coupling channel in :mod:`bvh`.
"""

import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from scipy import integrate

from .errors import DegenerateEnvironmentError
from .errors import QuadratureError
from .errors import SingularResolventError
from .errors import ValidationError

_log = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-6
QUADRATURE_TOL = 1e-6
RICHARDSON_POWERS = (1, 3, 5, 7)


@dataclass(frozen=True)
class Lorentzian:
    gamma: float
    kind: str = field(default="lorentzian", init=False)

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValidationError(f"Lorentzian width gamma = {self.gamma} must be positive")

    @property
    def width(self):
        return self.gamma

    def eval(self, e):
        e = np.asarray(e, dtype=float)
        return self.gamma / (np.pi * (e * e + self.gamma**2))

    def cdf(self, e):
        return 0.5 + np.arctan(np.asarray(e, dtype=float) / self.gamma) / np.pi

    def ppf(self, u):
        return self.gamma * np.tan(np.pi * (np.asarray(u, dtype=float) - 0.5))

    def stieltjes(self, w):
        """Integral of nu0(E) / (E - w) for non-real ``w``."""
        w = complex(w)
        if w.imag == 0.0:
            raise SingularResolventError("Stieltjes transform needs a non-real argument")
        return -1.0 / (w + 1j * self.gamma * np.sign(w.imag))

    def hilbert_pv(self, y, method="closed"):
        if method == "closed":
            return -y / (y * y + self.gamma**2)
        # the peak sits at distance |y| from the excision centre
        return excised_pv(self.eval, y, self.gamma / 8.0, nodes=[0.0])

    def describe(self):
        return {"dos": self.kind, "gamma": self.gamma}


@dataclass(frozen=True)
class Flat:
    """Locally flat density specified by its constant rate gamma0 = 2 pi nu0."""

    gamma0: float
    kind: str = field(default="flat", init=False)

    def __post_init__(self):
        if not self.gamma0 > 0.0:
            raise ValidationError(f"flat rate gamma0 = {self.gamma0} must be positive")

    def eval(self, e):
        return np.full_like(np.asarray(e, dtype=float), self.gamma0 / (2.0 * np.pi))

    def hilbert_pv(self, y, method="closed"):
        return 0.0

    def stieltjes(self, w):
        raise ValidationError("the flat density is not normalizable and has no Stieltjes transform")

    def ppf(self, u):
        raise ValidationError("the flat density is not normalizable and cannot be sampled")

    def describe(self):
        return {"dos": self.kind, "gamma0": self.gamma0}


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Piecewise-linear density on a grid, zero outside it.

    The values are renormalized to unit trapezoid integral at construction.
    """

    grid: np.ndarray
    values: np.ndarray
    source: str = ""
    kind: str = field(default="tabulated", init=False)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise ValidationError("tabulated density needs matching one-dimensional grid and values")
        if np.any(np.diff(grid) <= 0.0):
            raise ValidationError("tabulated density grid must be strictly increasing")
        if np.any(values < 0.0):
            raise ValidationError("tabulated density has negative values")
        total = integrate.trapezoid(values, grid)
        if total <= 0.0:
            raise ValidationError("tabulated density integrates to zero")
        if abs(total - 1.0) > NORMALIZATION_TOL:
            _log.info("Tabulated density integrates to %.9g, renormalized", total)
            values = values / total
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        cumulative = integrate.cumulative_trapezoid(values, grid, initial=0.0)
        object.__setattr__(self, "_cumulative", cumulative / cumulative[-1])

    @property
    def width(self):
        return float(np.min(np.diff(self.grid)))

    def covers(self, e):
        return self.grid[0] <= e <= self.grid[-1]

    def eval(self, e):
        return np.interp(e, self.grid, self.values, left=0.0, right=0.0)

    def cdf(self, e):
        return np.interp(e, self.grid, self._cumulative, left=0.0, right=1.0)

    def ppf(self, u):
        return np.interp(u, self._cumulative, self.grid)

    def stieltjes(self, w):
        """Exact integral of the piecewise-linear interpolant against 1 / (E - w)."""
        w = complex(w)
        if w.imag == 0.0:
            raise SingularResolventError("Stieltjes transform needs a non-real argument")
        left, right = self.grid[:-1], self.grid[1:]
        f_left, f_right = self.values[:-1], self.values[1:]
        slope = (f_right - f_left) / (right - left)
        at_w = f_left + slope * (w - left)
        logs = np.log(right - w) - np.log(left - w)
        return complex(np.sum(at_w * logs + slope * (right - left)))

    def hilbert_pv(self, y, method="quadrature"):
        nodes = self.grid
        distance = float(np.min(np.abs(nodes - y)))
        spacing = self.width
        # the interpolant must be linear on both sides of the excision window
        h0 = 0.5 * spacing if distance < 1e-12 * max(1.0, abs(y)) else 0.5 * min(distance, spacing)
        return excised_pv(self.eval, y, h0, nodes=nodes, reach=float(np.max(np.abs(nodes - y))))

    def describe(self):
        return {"dos": self.kind, "source": self.source, "points": int(self.grid.size)}


DensityOfStates = Lorentzian | Flat | Tabulated


def load_tabulated(path):
    """Read a two-column (energy, density) text file with ``#`` comments."""
    try:
        table = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as ex_msg:
        raise ValidationError(f"cannot read tabulated density '{path}': {ex_msg}") from ex_msg
    if table.shape[1] != 2:
        raise ValidationError(f"tabulated density '{path}' must have two columns, found {table.shape[1]}")
    _log.debug("Loaded %d density points from '%s'", table.shape[0], path)
    return Tabulated(table[:, 0], table[:, 1], source=str(path))


def from_spec(spec, gamma=None, gamma0=None):
    """Build a density from the command line form ``lorentzian``, ``flat`` or ``file:PATH``."""
    if spec == "lorentzian":
        if gamma is None:
            raise ValidationError("--gamma is required for the Lorentzian density")
        return Lorentzian(float(gamma))
    if spec == "flat":
        if gamma0 is None:
            raise ValidationError("--gamma0 is required for the flat density")
        return Flat(float(gamma0))
    if spec.startswith("file:"):
        return load_tabulated(spec[5:])
    raise ValidationError(f"unknown density of states '{spec}'")


def excised_pv(density, y, h0, nodes=None, reach=np.inf, levels=len(RICHARDSON_POWERS) + 1):
    """Principal value of the integral of density(x) / (x - y).

    The symmetric excision integral over |x - y| > h is evaluated for h = h0 / 2**k
    and extrapolated to h -> 0. Its error expansion contains only odd powers of h.
    """

    def odd_part(u):
        return (density(y + u) - density(y - u)) / u

    breakpoints = np.empty(0)
    if nodes is not None:
        distances = np.unique(np.abs(np.asarray(nodes, dtype=float) - y))
        breakpoints = distances[(distances > h0) & (distances < reach)]
    upper = reach if np.isfinite(reach) else 2.0 * float(np.max(breakpoints, initial=0.0)) + 64.0 * h0
    quad_options = {"epsabs": 1e-13, "epsrel": 1e-11}
    if breakpoints.size:
        far, _err = integrate.quad(
            odd_part, h0, upper, points=breakpoints, limit=breakpoints.size + 100, **quad_options
        )
    else:
        far, _err = integrate.quad(odd_part, h0, upper, limit=400, **quad_options)
    if not np.isfinite(reach):
        tail, _err = integrate.quad(odd_part, upper, np.inf, limit=400, **quad_options)
        far += tail

    estimates = []
    for level in range(levels):
        h = h0 / 2**level
        near = 0.0
        if level:
            near, _err = integrate.quad(odd_part, h, h0, limit=200, **quad_options)
        estimates.append(far + near)

    table = [list(estimates)]
    for power in RICHARDSON_POWERS[: levels - 1]:
        factor = 2.0**power
        previous = table[-1]
        pairs = zip(previous, previous[1:])
        table.append([(factor * fine - coarse) / (factor - 1.0) for coarse, fine in pairs])
    diagonal = [row[-1] for row in table]
    change = abs(diagonal[-1] - diagonal[-2])
    _log.debug("Principal value at y=%.6g: estimates %s, last change %.3e", y, diagonal, change)
    if change > QUADRATURE_TOL:
        raise QuadratureError(
            f"principal value at y={y:.6g} did not converge (last change {change:.3e})", diagonal
        )
    return float(diagonal[-1])


@dataclass(frozen=True)
class RateSet:
    """Decay rates and phases of the weak-coupling channel at fixed (E, s)."""

    gamma0: float
    gamma_plus: float
    gamma_minus: float
    gamma_2plus: float
    gamma_2minus: float
    psi_plus: float = 0.0
    psi_minus: float = 0.0
    clipped: bool = False
    gamma_tilde_plus: float = field(init=False)
    gamma_tilde_minus: float = field(init=False)
    gamma_sum: float = field(init=False)
    gamma_tilde_sum: float = field(init=False)

    def __post_init__(self):
        for name in ("gamma0", "gamma_plus", "gamma_minus", "gamma_2plus", "gamma_2minus"):
            value = getattr(self, name)
            if value < 0.0 or not np.isfinite(value):
                raise ValidationError(f"rate {name} = {value} must be finite and non-negative")
        object.__setattr__(self, "gamma_tilde_plus", self.gamma0 + self.gamma_plus + self.gamma_2plus)
        object.__setattr__(self, "gamma_tilde_minus", self.gamma0 + self.gamma_minus + self.gamma_2minus)
        object.__setattr__(self, "gamma_sum", self.gamma_plus + self.gamma_minus)
        object.__setattr__(self, "gamma_tilde_sum", self.gamma0 + self.gamma_plus + self.gamma_minus)

    def base(self, alpha):
        return self.gamma_plus if alpha > 0 else self.gamma_minus

    def double(self, alpha):
        return self.gamma_2plus if alpha > 0 else self.gamma_2minus

    def tilde(self, alpha):
        return self.gamma_tilde_plus if alpha > 0 else self.gamma_tilde_minus

    def five(self):
        return np.array([self.gamma0, self.gamma_plus, self.gamma_minus, self.gamma_2plus, self.gamma_2minus])

    def as_dict(self):
        return {
            "gamma0": self.gamma0,
            "gamma_plus": self.gamma_plus,
            "gamma_minus": self.gamma_minus,
            "gamma_2plus": self.gamma_2plus,
            "gamma_2minus": self.gamma_2minus,
            "gamma_tilde_plus": self.gamma_tilde_plus,
            "gamma_tilde_minus": self.gamma_tilde_minus,
            "gamma_sum": self.gamma_sum,
            "gamma_tilde_sum": self.gamma_tilde_sum,
            "psi_plus": self.psi_plus,
            "psi_minus": self.psi_minus,
        }


def _check_splitting(s):
    if not s > 0.0:
        raise ValidationError(f"qubit splitting s = {s} must be positive")


def pv_phases(dos, e_env, s, method=None):
    """Phases (psi_plus, psi_minus) from principal values at E + 2s and E - 2s."""
    _check_splitting(s)
    if method is None:
        upper = dos.hilbert_pv(e_env + 2.0 * s)
        lower = dos.hilbert_pv(e_env - 2.0 * s)
    else:
        upper = dos.hilbert_pv(e_env + 2.0 * s, method=method)
        lower = dos.hilbert_pv(e_env - 2.0 * s, method=method)
    return -2.0 * (upper - lower), 2.0 * (upper + lower)


def rates(dos, e_env, s, phase_method=None):
    _check_splitting(s)
    points = e_env + s * np.array([0.0, 2.0, -2.0, 4.0, -4.0])
    clipped = False
    if isinstance(dos, Tabulated):
        outside = [float(point) for point in points if not dos.covers(point)]
        if outside:
            clipped = True
            _log.warning("Density queried outside its grid at %s, rates set to zero there", outside)
    nu = np.asarray(dos.eval(points), dtype=float)
    if not np.any(nu > 0.0):
        raise DegenerateEnvironmentError(f"density vanishes at all channel energies around E = {e_env}")
    gammas = 2.0 * np.pi * nu
    psi_plus, psi_minus = pv_phases(dos, e_env, s, method=phase_method)
    rate_set = RateSet(
        gamma0=float(gammas[0]),
        gamma_plus=float(gammas[1]),
        gamma_minus=float(gammas[2]),
        gamma_2plus=float(gammas[3]),
        gamma_2minus=float(gammas[4]),
        psi_plus=psi_plus,
        psi_minus=psi_minus,
        clipped=clipped,
    )
    _log.debug("Rates at E=%g, s=%g: %s", e_env, s, rate_set.as_dict())
    return rate_set


def one_qubit_markov(rate_set, rtol=1e-12):
    """Markov criteria of the single-qubit channel.

    The determinant of its large-time population matrix vanishes iff the rates at
    E + 2s and E - 2s coincide, and the channel is Markovian iff both also equal
    the rate at E.
    """
    scale = max(rate_set.five().max(), np.finfo(float).tiny)
    det_zero = abs(rate_set.gamma_plus - rate_set.gamma_minus) <= rtol * scale
    markovian = det_zero and abs(rate_set.gamma_plus - rate_set.gamma0) <= rtol * scale
    return {"det_zero": bool(det_zero), "markovian": bool(markovian)}
