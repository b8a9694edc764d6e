"""Exception hierarchy shared by the library and the CLI."""


class SpectralFactorError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(SpectralFactorError):
    """Input data could not be parsed (CLI exit code 1)."""


class PreconditionError(SpectralFactorError):
    """Input violates a documented precondition (CLI exit code 2)."""


class NumericalBreakdownError(SpectralFactorError):
    """Computation reached a numerically impossible state (CLI exit code 3)."""
