"""Exception types shared across the package."""


class ClusptError(Exception):
    """Base class for every error raised by :mod:`cluspt`."""


class InstanceError(ClusptError, ValueError):
    """Bad input: malformed instance, out-of-range vertex, bad argument."""


class ParseError(InstanceError):
    """Instance text that does not follow the file grammar."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(ClusptError):
    """An operation was called with inputs violating its precondition."""


class DecodeError(ClusptError):
    """A chromosome could not be turned into a clustered spanning tree."""


class InfeasibleError(ClusptError):
    """No valid chromosome could be produced for an instance."""


class OracleRefusal(ClusptError):
    """Exhaustive search declined because the space exceeds its cap."""


class UndefinedCorrelation(ClusptError, ValueError):
    """Pearson correlation requested for a constant vector."""
