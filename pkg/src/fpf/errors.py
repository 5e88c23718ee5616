"""Exception hierarchy shared by every module."""


class FPFError(Exception):
    """Base class for library errors."""


class DimensionMismatchError(FPFError, ValueError):
    """Operands live in different ambient spaces."""


class ZeroFrequencyError(FPFError, ValueError):
    """An operation that needs a nonzero frequency received m = 0."""


class EmptySetError(FPFError, ValueError):
    """Decision procedures reject the empty set (it is spectral but cannot tile)."""


class IncompleteFunctionError(FPFError, ValueError):
    """A function table does not cover all of Z_p."""


class RankRangeError(FPFError, IndexError):
    """A rank range falls outside the enumerated family."""


class InvalidPairError(FPFError, ValueError):
    """A pair that was required to be spectral is not."""


class PreconditionError(FPFError, ValueError):
    """A documented precondition of a construction does not hold."""


class UnsupportedDimensionError(FPFError, ValueError):
    """The operation is only defined in dimension 2."""


class SetFileError(FPFError, ValueError):
    """Malformed set or pair file."""


class ConfigError(FPFError, ValueError):
    """Invalid campaign configuration."""


class TheoremViolation(FPFError, AssertionError):
    """An exact check contradicted a proven statement; always a bug."""
