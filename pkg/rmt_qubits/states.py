# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Two-qubit density matrices, X-form and block views, initial-condition families.

The product basis is ``|++>, |+->, |-+>, |-->`` (indices 0..3). The block basis
reorders it as ``|++>, |-->`` for the plus block and ``|+->, |-+>`` for the minus
block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from .errors import ConstraintError
from .errors import InvalidStateError
from .errors import ValidationError
from .errors import XFormError

_log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
X_FORM_TOL = 1e-10
NORMALIZATION_TOL = 1e-9

PLUS_INDICES = (0, 3)
MINUS_INDICES = (1, 2)

# entries allowed to be nonzero in X-form
X_MASK = np.array(
    [
        [True, False, False, True],
        [False, True, True, False],
        [False, True, True, False],
        [True, False, False, True],
    ]
)

BASIS_LABELS = ("++", "+-", "-+", "--")


def _frozen(values, shape):
    array = np.array(values, dtype=complex)
    if array.shape != shape:
        raise ValidationError(f"expected a matrix of shape {shape}, got {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Validated 4x4 density matrix in the product basis.

    Parameters
    ----------
    entries : array_like
        4x4 complex matrix. It must be Hermitian, of unit trace and positive
        semidefinite within the module tolerances.
    """

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries, (4, 4))
        object.__setattr__(self, "entries", entries)

        asymmetry = np.max(np.abs(entries - entries.conj().T))
        if asymmetry > HERMITIAN_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (max deviation {asymmetry:.3e})")
        trace_error = abs(np.trace(entries) - 1.0)
        if trace_error > TRACE_TOL:
            raise InvalidStateError(f"trace differs from one by {trace_error:.3e}")
        smallest = float(np.linalg.eigvalsh(entries)[0])
        if smallest < -PSD_TOL:
            raise InvalidStateError(f"matrix is not positive semidefinite (eigenvalue {smallest:.3e})")

    @classmethod
    def from_numeric(cls, matrix, tolerance=1e-8):
        """Build a state from a numerically evolved matrix.

        The matrix is symmetrized and its trace renormalized, provided both
        corrections are below ``tolerance``.
        """
        matrix = np.asarray(matrix, dtype=complex)
        asymmetry = np.max(np.abs(matrix - matrix.conj().T))
        trace = np.trace(matrix)
        if asymmetry > tolerance or abs(trace - 1.0) > tolerance:
            raise InvalidStateError(
                f"numeric matrix too far from a state (asymmetry {asymmetry:.3e}, trace {trace:.12g})"
            )
        hermitian = 0.5 * (matrix + matrix.conj().T)
        return cls(hermitian / np.trace(hermitian).real)

    def rho(self, row, col):
        """Entry rho_{row,col} with 1-based indices as in the product basis."""
        return complex(self.entries[row - 1, col - 1])

    def off_x_max(self):
        """Largest modulus outside the X pattern and its (0-based) index."""
        outside = np.where(X_MASK, 0.0, np.abs(self.entries))
        flat = int(np.argmax(outside))
        index = divmod(flat, 4)
        return float(outside[index]), index

    def is_x_form(self, tol=X_FORM_TOL):
        return self.off_x_max()[0] <= tol

    def require_x_form(self, tol=X_FORM_TOL):
        value, index = self.off_x_max()
        if value > tol:
            raise XFormError(value, index)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)

    def purity(self):
        return float(np.real(np.trace(self.entries @ self.entries)))

    def partial_trace(self, keep="A"):
        """Reduced single-qubit density matrix of qubit ``keep``."""
        tensor = self.entries.reshape(2, 2, 2, 2)
        if keep == "A":
            return np.einsum("abcb->ac", tensor)
        if keep == "B":
            return np.einsum("abad->bd", tensor)
        raise ValidationError(f"unknown qubit '{keep}'")

    def swap_qubits(self):
        swapped = self.entries.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2).reshape(4, 4)
        return TwoQubitState(swapped)

    def local_phase_rotation(self, phi_a, phi_b):
        """Conjugate by exp(-i(phi_a sz x 1 + phi_b 1 x sz)/2)."""
        signs = np.array([1.0, -1.0])
        phases = np.exp(-0.5j * (phi_a * signs[:, None] + phi_b * signs[None, :])).reshape(4)
        rotated = phases[:, None] * self.entries * phases.conj()[None, :]
        return TwoQubitState(rotated)


@dataclass(frozen=True, eq=False)
class BlockState:
    """The two 2x2 blocks of an X-state."""

    plus_block: np.ndarray
    minus_block: np.ndarray

    def __post_init__(self):
        plus = _frozen(self.plus_block, (2, 2))
        minus = _frozen(self.minus_block, (2, 2))
        object.__setattr__(self, "plus_block", plus)
        object.__setattr__(self, "minus_block", minus)
        trace_error = abs(np.trace(plus) + np.trace(minus) - 1.0)
        if trace_error > TRACE_TOL:
            raise InvalidStateError(f"block traces differ from one by {trace_error:.3e}")


@dataclass(frozen=True)
class ABlockCoords:
    """Coordinates (rho11, A1, rho44, A2, A3, rho14) of a block state."""

    rho11: float
    a1: float
    rho44: float
    a2: float
    a3: complex
    rho14: complex

    def population_triple(self):
        return np.array([self.rho11, self.a1, self.rho44])


def to_blocks(state, tol=X_FORM_TOL):
    state.require_x_form(tol)
    entries = state.entries
    return BlockState(
        plus_block=entries[np.ix_(PLUS_INDICES, PLUS_INDICES)],
        minus_block=entries[np.ix_(MINUS_INDICES, MINUS_INDICES)],
    )


def from_blocks(blocks):
    entries = np.zeros((4, 4), dtype=complex)
    entries[np.ix_(PLUS_INDICES, PLUS_INDICES)] = blocks.plus_block
    entries[np.ix_(MINUS_INDICES, MINUS_INDICES)] = blocks.minus_block
    return TwoQubitState(entries)


def to_a_coords(blocks):
    minus = blocks.minus_block
    plus = blocks.plus_block
    return ABlockCoords(
        rho11=float(plus[0, 0].real),
        a1=float(0.5 * np.sum(minus).real),
        rho44=float(plus[1, 1].real),
        a2=float(0.5 * (minus[0, 0] - minus[0, 1] - minus[1, 0] + minus[1, 1]).real),
        a3=complex(0.5 * (minus[0, 0] + minus[0, 1] - minus[1, 0] - minus[1, 1])),
        rho14=complex(plus[0, 1]),
    )


def from_a_coords(coords):
    total = coords.a1 + coords.a2
    difference = 2.0 * coords.a3.real
    rho23 = 0.5 * (coords.a1 - coords.a2) + 1j * coords.a3.imag
    minus = np.array(
        [
            [0.5 * (total + difference), rho23],
            [np.conj(rho23), 0.5 * (total - difference)],
        ],
        dtype=complex,
    )
    plus = np.array(
        [[coords.rho11, coords.rho14], [np.conj(coords.rho14), coords.rho44]],
        dtype=complex,
    )
    return BlockState(plus_block=plus, minus_block=minus)


def _check_unit_interval(name, value):
    if not 0.0 <= value <= 1.0:
        raise ConstraintError(f"{name} = {value} outside [0, 1]")


def _resolve_beta(name, alpha, beta):
    _check_unit_interval(name, alpha)
    if beta is None:
        return complex(np.sqrt(max(0.0, 1.0 - alpha * alpha)))
    beta = complex(beta)
    if abs(alpha * alpha + abs(beta) ** 2 - 1.0) > NORMALIZATION_TOL:
        raise ConstraintError(f"{name}^2 + |beta|^2 = {alpha * alpha + abs(beta) ** 2:.12g} is not one")
    return beta


def _bell_vector(k, alpha, beta):
    vector = np.zeros(4, dtype=complex)
    if k == 1:
        # alpha |-+> + beta |+->
        vector[2] = alpha
        vector[1] = beta
    else:
        # alpha |--> + beta |++>
        vector[3] = alpha
        vector[0] = beta
    return vector


@dataclass(frozen=True)
class Product:
    alpha0: float
    family: str = field(default="product", init=False)

    def __post_init__(self):
        _check_unit_interval("alpha0", self.alpha0)

    @property
    def label(self):
        return "0"

    def density_matrix(self):
        single = np.diag([self.alpha0**2, 1.0 - self.alpha0**2])
        return np.kron(single, single).astype(complex)


@dataclass(frozen=True)
class Bell1:
    alpha1: float
    beta1: complex | None = None
    family: str = field(default="bell1", init=False)

    def __post_init__(self):
        object.__setattr__(self, "beta1", _resolve_beta("alpha1", self.alpha1, self.beta1))

    @property
    def label(self):
        return "1"

    def density_matrix(self):
        vector = _bell_vector(1, self.alpha1, self.beta1)
        return np.outer(vector, vector.conj())


@dataclass(frozen=True)
class Bell2:
    alpha2: float
    beta2: complex | None = None
    family: str = field(default="bell2", init=False)

    def __post_init__(self):
        object.__setattr__(self, "beta2", _resolve_beta("alpha2", self.alpha2, self.beta2))

    @property
    def label(self):
        return "2"

    def density_matrix(self):
        vector = _bell_vector(2, self.alpha2, self.beta2)
        return np.outer(vector, vector.conj())


@dataclass(frozen=True)
class Werner:
    """Extended Werner state built on the Bell-like state of family ``k``."""

    k: int
    alpha3: float
    alpha: float
    beta: complex | None = None
    family: str = field(default="werner", init=False)

    def __post_init__(self):
        if self.k not in {1, 2}:
            raise ConstraintError(f"Werner family k = {self.k} must be 1 or 2")
        if not -1.0 / 3.0 <= self.alpha3 <= 1.0:
            raise ConstraintError(f"alpha3 = {self.alpha3} outside [-1/3, 1]")
        object.__setattr__(self, "beta", _resolve_beta(f"alpha{self.k}", self.alpha, self.beta))

    @property
    def label(self):
        return f"3({self.k})"

    def density_matrix(self):
        vector = _bell_vector(self.k, self.alpha, self.beta)
        pure = np.outer(vector, vector.conj())
        return self.alpha3 * pure + 0.25 * (1.0 - self.alpha3) * np.eye(4)


InitialCondition = Product | Bell1 | Bell2 | Werner

FAMILIES = ("product", "bell1", "bell2", "werner")


def initial_condition(family, alpha, alpha3=1.0, k=1, beta_phase=0.0):
    """Build an initial condition from flat parameters.

    ``alpha`` is alpha0, alpha1 or alpha2 for the first three families and the
    Bell-like amplitude alpha_k for the Werner family.
    """
    beta = None
    if beta_phase:
        _check_unit_interval("alpha", alpha)
        beta = np.sqrt(max(0.0, 1.0 - alpha * alpha)) * np.exp(1j * beta_phase)
    if family == "product":
        return Product(alpha)
    if family == "bell1":
        return Bell1(alpha, beta)
    if family == "bell2":
        return Bell2(alpha, beta)
    if family == "werner":
        return Werner(k, alpha3, alpha, beta)
    raise ConstraintError(f"unknown initial-condition family '{family}'")


def build_initial(cond):
    state = TwoQubitState(cond.density_matrix())
    _log.debug("Built initial condition %s", cond)
    return state


def model_name(topology_letter, cond):
    """Model label such as ``C2`` or ``I3(1)``."""
    return f"{topology_letter}{cond.label}"


def csv_header():
    names = []
    for row in range(1, 5):
        for col in range(1, 5):
            names.extend((f"re_rho{row}{col}", f"im_rho{row}{col}"))
    return names


def csv_row(state):
    flat = state.entries.reshape(16)
    return [value for entry in flat for value in (float(entry.real), float(entry.imag))]
