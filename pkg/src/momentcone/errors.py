"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class MomentConeError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParameterError(MomentConeError, ValueError):
    """Malformed input: bad family/rank, dimension mismatch, unparsable label."""

    exit_code = 2


class PreconditionError(MomentConeError):
    """Input is well formed but violates a mathematical precondition."""

    exit_code = 3


class UnsupportedOperationError(MomentConeError):
    """The operation is outside the supported range (dimension, family)."""

    exit_code = 3


class InvariantError(MomentConeError):
    """An internal consistency check failed."""

    exit_code = 4
