"""Exception hierarchy.

Input problems derive from :class:`ValidationError`; failures of the numerical
machinery derive from :class:`NumericalError`. The command line maps the two
families to distinct exit codes.
"""


class MinkspecError(Exception):
    """Base class for all package errors."""


class ValidationError(MinkspecError, ValueError):
    """The problem data is malformed."""


class DimensionMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NonFiniteEntry(ValidationError):
    pass


class ParseError(ValidationError):
    """A problem file could not be parsed; the message carries the key or line."""


class PoleEvaluation(MinkspecError, ValueError):
    """A secular function was evaluated on (or numerically at) one of its poles."""


class TangencyDerivative(MinkspecError, ValueError):
    """The trajectory derivative is requested where g'(lambda) = 1."""


class NumericalError(MinkspecError, ArithmeticError):
    """An internal numerical procedure failed or produced inconsistent output."""


class ConvergenceFailure(NumericalError):
    pass


class CountMismatch(NumericalError):
    pass


class Unclassifiable(NumericalError):
    pass


class AmbiguousSign(NumericalError):
    pass


class CanonicalViolation(NumericalError):
    pass


class OracleDivergence(NumericalError):
    pass


class IoError(MinkspecError, OSError):
    """An output file could not be written."""
