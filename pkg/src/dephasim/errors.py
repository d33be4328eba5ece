"""Exception types raised across the package."""


class DephasimError(Exception):
    """Base class for all package errors."""


class InvalidStateError(DephasimError, ValueError):
    pass


class InvalidDistributionError(DephasimError, ValueError):
    pass


class SingularScaling(DephasimError, ArithmeticError):
    """|kappa(0)| is too small to rescale a trace by it."""


class MissingOrigin(DephasimError, ValueError):
    """A trace that must start at d = 0 does not."""


class NonPhysicalTarget(DephasimError, ValueError):
    pass


class AliasingError(DephasimError, ValueError):
    """A grid violates the sampling bound of a discrete Fourier pair."""


class BandwidthTooNarrow(DephasimError, ValueError):
    pass


class SizeTooLarge(DephasimError, ValueError):
    pass


class IntegralDiverges(DephasimError, ArithmeticError):
    pass


class AllZeroCounts(DephasimError, ValueError):
    pass


class ConfigError(DephasimError, ValueError):
    pass
