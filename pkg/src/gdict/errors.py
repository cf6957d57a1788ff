"""Shared exception types.

Everything derives from ValueError so callers who don't care about the
distinction can catch one thing; the CLI maps these to exit code 1.
"""


class CapacityError(ValueError):
    """Requested state vector exceeds the configured qubit cap."""


class ParseError(ValueError):
    """A text input (circuit file, database file) failed to parse."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoWinnerError(ValueError):
    """No record of the search database satisfies the clause."""


class UnsupportedModulusError(ValueError):
    """Modulus is not of the supported 2**k - 1 form."""
