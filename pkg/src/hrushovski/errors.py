"""Exception types shared across the package.

The CLI maps these onto its exit codes: parse errors exit 2, precondition
violations exit 3.
"""


class GraphFormatError(ValueError):
    """A graph, diagram or config file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class WindowError(PreconditionError):
    """Extension search requested outside the one-point-extension window.

    Extensions that add six or more vertices at constant predimension are
    not guaranteed to decompose into one-point extensions, so the tower
    search cannot be trusted to be complete there.
    """


class UnsupportedConfigError(PreconditionError):
    """The control function or alpha is not supported by this operation."""


class NonTriangularSystemError(ValueError):
    """The equation system cannot be solved by linear back-substitution."""

    def __init__(self, message, unresolved=()):
        self.unresolved = tuple(unresolved)
        super().__init__(message)


class ZeroDenominatorError(ArithmeticError):
    """A back-substitution step would divide by the zero rational function."""
