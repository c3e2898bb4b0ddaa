"""Exception families shared by the whole package.

The command line maps every `ValidationError` to exit code 2
and every `NumericalError` to exit code 3.
More specific errors are defined next to the code raising them.
"""


class FsnSelectorError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FsnSelectorError, ValueError):
    """Error raised when an input violates a documented precondition."""


class NumericalError(FsnSelectorError, ArithmeticError):
    """Error raised when a numerical procedure cannot deliver a certified result."""


class TheoremViolationError(NumericalError):
    """Error raised when a guaranteed property fails on a supposedly valid input."""
