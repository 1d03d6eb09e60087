"""Exception types shared across the solver pipeline."""


class ProjsolveError(Exception):
    """Base class for all library errors."""


class PolynomialSyntaxError(ProjsolveError):
    """Raised on malformed polynomial or system text; carries line/column."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class NonSquareSystemError(ProjsolveError):
    """System does not have as many polynomials as variables."""


class NotZeroDimensionalError(ProjsolveError):
    """A resultant vanished identically: the system is positive-dimensional
    (or fully degenerate) along the requested direction."""


class RefinementError(ProjsolveError):
    """A width target could not be met because no refinement path exists."""


class NoPreimageError(ProjsolveError):
    """A projected value has no preimage on the given grid."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CertificationError(ProjsolveError):
    """A certificate that was expected to hold failed to verify."""
