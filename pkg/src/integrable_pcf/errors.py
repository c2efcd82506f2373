"""Exception hierarchy shared by every module of the package."""


class PCFError(Exception):
    """Base class for all package errors."""


class PrecisionError(PCFError):
    """Input precision cannot certify the requested result.

    ``required_digits`` is the number of decimal digits the real inputs would
    need for the computation to go through.
    """

    def __init__(self, message, required_digits=None):
        super().__init__(message)
        self.required_digits = required_digits


class DegeneratePolynomialError(PCFError):
    """Polynomial phase of degree < 2."""


class WindowError(PCFError):
    """Trace window does not cover the support of the test function."""

    def __init__(self, message, required_window=None):
        super().__init__(message)
        self.required_window = required_window


class CostGuardError(PCFError):
    """Exhaustive evaluation would exceed the configured cost bound."""


class UnsupportedKindError(PCFError):
    """Operation needs a test function with a physical-side closed form."""


class InvalidApproximationError(PCFError):
    """Rational approximation does not satisfy the stated hypotheses."""
