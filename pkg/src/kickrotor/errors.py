"""Exception hierarchy shared by every module in the package."""


class KickedRotorError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(KickedRotorError, ValueError):
    pass


class PulseTooLongError(InvalidParameterError):
    """The pulse width exceeds the kicking period (pulse fraction > 1)."""


class InvalidStateError(KickedRotorError, ValueError):
    pass


class SchemaError(KickedRotorError, ValueError):
    """An input table does not follow the sweep CSV layout."""


class TruncationError(KickedRotorError, ArithmeticError):
    """The momentum ladder could not be made wide enough to hold the state."""


class CalibrationError(KickedRotorError, ArithmeticError):
    """A kick-ratio estimate needed the square root of a negative number."""


class ConvergenceError(KickedRotorError, ArithmeticError):
    """An adaptive integrator failed to reach its tolerance."""
