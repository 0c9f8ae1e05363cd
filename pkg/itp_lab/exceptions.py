# SPDX-License-Identifier: GPL-3.0-or-later


class ItpLabError(Exception):
    """The base class for all itp-lab exceptions."""


class ConfigError(ItpLabError):
    """The configuration is invalid."""


class ValidationError(ItpLabError):
    """Denote invalid input."""


class DomainError(ValidationError):
    """An argument lies outside the domain of the operation."""


class UsageError(ValidationError):
    """The command line is invalid."""

    exit_code = 2


class UnsupportedCaseError(ItpLabError):
    """The operation is not defined for the given boundary case."""


class ComputationError(ItpLabError):
    """A numerical computation failed."""


class IntegrationError(ComputationError):
    """The radial integrator could not reach the boundary."""

    def __init__(self, message, radius):
        super().__init__(message)
        self.radius = radius


class DtNPoleError(ComputationError):
    """The boundary value vanishes, so the Dirichlet-to-Neumann eigenvalue has a pole."""


class NearSingularSolveError(ComputationError):
    """The boundary value problem is too close to a Dirichlet eigenvalue."""

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class ContourProximityError(ComputationError):
    """A zero of the function lies too close to the sampled contour."""

    def __init__(self, message, min_abs, threshold):
        super().__init__(message)
        self.min_abs = min_abs
        self.threshold = threshold


class ConvergenceError(ComputationError):
    """An iteration did not converge within its budget."""

    def __init__(self, message, gap):
        super().__init__(message)
        self.gap = gap
