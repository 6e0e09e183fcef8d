"""Exception types shared across the package.

The command line maps these onto process exit codes: validation problems
(bad parameters, unreadable inputs, sets that cannot norm the requested
space) exit with code 2, while violations of certified inequalities or
precision audits exit with code 3.  The latter indicate a bug rather than
a user error and should never occur in normal operation.
"""


class NormMeshError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NormMeshError):
    """A parameter or input fails its documented precondition."""


class InputError(ValidationError):
    """An external input (file or stream) is unreadable or malformed."""


class NonDeterminingError(ValidationError):
    """The sampled grid cannot norm the requested polynomial space."""

    def __init__(self, message: str, rank: int | None = None, dim: int | None = None):
        super().__init__(message)
        self.rank = rank
        self.dim = dim


class InvariantViolation(NormMeshError):
    """A certified inequality or a precision audit failed."""
