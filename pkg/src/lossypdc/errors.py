"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition (shape, norm, range)."""


class ConvergenceError(RuntimeError):
    """The step-doubling convergence gate failed for the requested step count."""


class NumericalBlowupError(RuntimeError):
    """NaN/Inf detected while integrating the master equations."""


class CalibrationError(RuntimeError):
    """Gain calibration could not bracket the target photon number."""


class PartitionDegeneracyError(RuntimeError):
    """A joint quadrature eigenvector has no support in one partition."""


class SchemaError(ValueError):
    """A configuration file violates the documented schema."""
