"""Custom exceptions for the workbench."""


class WorkbenchError(Exception):
    """Base exception for workbench errors."""
    pass


class NoiseModelError(WorkbenchError):
    """Invalid noise model construction or query."""
    pass


class PulseError(WorkbenchError):
    """Invalid control pulse sequence."""
    pass


class DynamicsError(WorkbenchError):
    """Invalid input to a propagation routine."""
    pass


class FidelityError(WorkbenchError):
    """Invalid operands for a fidelity computation."""
    pass


class OptimizationError(WorkbenchError):
    """Invalid optimizer input."""
    pass


class ConfigError(WorkbenchError):
    """Run configuration failed schema validation."""
    pass


class NumericalError(WorkbenchError):
    """A numerical computation failed or produced non-finite values."""
    pass


class SweepFailedError(NumericalError):
    """One or more grid points of a sweep failed; carries the failure records."""

    def __init__(self, message: str, failures=()):
        super().__init__(message)
        self.failures = list(failures)
