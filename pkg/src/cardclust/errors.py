"""Exception hierarchy shared across the package."""


class CardclustError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(CardclustError):
    """Malformed numeric input (non-finite coordinates, asymmetric matrices, ...)."""


class SpecViolationError(CardclustError):
    """A cardinality specification is inconsistent with the data or operation."""


class DegenerateClusterError(CardclustError):
    """An operation that needs non-empty clusters received an empty one."""


class ResourceLimitError(CardclustError):
    """A configured size or enumeration cap would be exceeded."""


class PreconditionError(CardclustError):
    """An input solution violates the feasibility preconditions of a transform."""


class SolverFailure(CardclustError):
    """The backend solver reported infeasibility or a numerical breakdown."""


class IngestError(CardclustError):
    """A data file could not be parsed into a dataset."""


class ConfigError(CardclustError):
    """An experiment configuration is unusable."""
