"""Exception types raised across the package."""


class MultiMultError(Exception):
    """Base class for every error raised by multimult."""


class BoundMismatch(MultiMultError, ValueError):
    """Cardinals or functions with incompatible bounds were combined."""


class UnknownElement(MultiMultError, KeyError):
    """An element name is not part of the carrier."""

    def __str__(self):
        return f"unknown element {self.args[0]!r}" if self.args else "unknown element"


class WordTooShort(MultiMultError, ValueError):
    pass


class NotAssociative(MultiMultError, ValueError):
    pass


class BaseNotAssociative(NotAssociative):
    pass


class NotFinitary(MultiMultError, ValueError):
    pass


class CarrierMismatch(MultiMultError, ValueError):
    pass


class NegativeCoefficient(MultiMultError, ArithmeticError):
    """A Kazhdan-Lusztig re-expansion produced a negative coefficient.

    This can only happen through an implementation bug; it is never valid output.
    """


class FormatError(MultiMultError, ValueError):
    """Malformed table input."""
