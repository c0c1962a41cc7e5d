"""Exception hierarchy shared by all menos modules."""


class MenosError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(MenosError, ValueError):
    """Malformed numerical input (non-finite entries, wrong shape, non-Hermitian)."""


class InvalidArgument(MenosError, ValueError):
    pass


class DimensionMismatch(MenosError, ValueError):
    pass


class NotPositiveSemidefinite(MenosError, ValueError):
    pass


class SupportViolation(MenosError, ValueError):
    """The state derivative has weight on the kernel-kernel block of the state."""


class InvalidBasis(MenosError, ValueError):
    pass


class InvalidPovm(MenosError, ValueError):
    pass


class DegenerateModel(MenosError, ValueError):
    """The state does not depend on the parameter to first order (zero QFI)."""


class NumericalInconsistency(MenosError, ArithmeticError):
    pass


class UndefinedSusceptibility(MenosError, ArithmeticError):
    """Susceptibility requested where the CFI is zero or outcomes are too few."""


class NoFeasiblePoint(MenosError, RuntimeError):
    pass
