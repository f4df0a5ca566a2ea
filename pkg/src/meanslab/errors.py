"""Exception hierarchy shared by all meanslab modules."""

from __future__ import annotations


class MeansError(ValueError):
    """Base class for invalid input to a meanslab routine."""


class InvalidArgumentError(MeansError):
    """Non-finite or nonpositive argument."""


class DomainError(MeansError):
    """Argument outside the domain where a formula or series is valid."""


class DegenerateInputError(MeansError):
    """Equal arguments passed to a routine that needs a != b."""


class NumericFailure(ArithmeticError):
    """An iterative procedure (extrapolation, bracketing, root finding) failed."""


class ParseError(MeansError):
    """Syntax error in an expression or claims file, with a byte offset."""

    def __init__(self, message: str, offset: int | None = None, text: str | None = None):
        self.offset = offset
        self.text = text
        if offset is not None:
            message = f"{message} at offset {offset}"
            if text is not None:
                message = f"{message}: {text!r}"
        super().__init__(message)
