"""Exception types shared across the package."""


class WclError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(WclError):
    """The caller violated a precondition (bad operands, bad input data)."""


class CapExceeded(WclError):
    """A configurable size cap was exceeded ("universe too large")."""


class ParseError(WclError):
    """Syntax error in a formula, configuration, model, or matrix text.

    Carries the byte offset plus 1-based line/column of the offending
    position and, when known, the set of token kinds that were expected.
    """

    def __init__(self, message, offset=0, line=1, column=1, expected=()):
        super().__init__(message)
        self.message = message
        self.offset = offset
        self.line = line
        self.column = column
        self.expected = tuple(expected)

    def __str__(self):
        loc = f"{self.line}:{self.column}"
        if self.expected:
            return f"{loc}: {self.message} (expected {', '.join(self.expected)})"
        return f"{loc}: {self.message}"
