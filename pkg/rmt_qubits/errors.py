# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Exceptions raised by rmt_qubits.

Every exception carries the process exit code the command line maps it to.
"""


class RmtQubitsError(Exception):
    exit_code = 1


class ValidationError(RmtQubitsError):
    """Input rejected before or during computation."""

    exit_code = 2


class InvalidStateError(ValidationError):
    pass


class XFormError(ValidationError):
    """Matrix is not of X-form within tolerance."""

    def __init__(self, max_entry, index):
        self.max_entry = max_entry
        self.index = index
        super().__init__(f"state is not X-form: |rho{index[0] + 1}{index[1] + 1}| = {max_entry:.3e}")


class ConstraintError(ValidationError):
    pass


class DegenerateEnvironmentError(ValidationError):
    pass


class NoStationaryStateError(ValidationError):
    pass


class TopologyMismatchError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class ConvergenceError(RmtQubitsError):
    exit_code = 3


class SolverError(ConvergenceError):
    def __init__(self, message, residual=None, iterations=None):
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class QuadratureError(ConvergenceError):
    def __init__(self, message, estimates=()):
        self.estimates = tuple(estimates)
        super().__init__(message)


class SingularResolventError(ConvergenceError):
    pass


class ResourceBudgetError(RmtQubitsError):
    exit_code = 4
