"""Exception hierarchy shared by every capvol module."""


class CapvolError(Exception):
    """Base class for all capvol errors."""


class SingularMatrix(CapvolError):
    pass


class NoConvergence(CapvolError):
    pass


class UnstableSystem(CapvolError):
    """State matrix is not Hurwitz stable."""


class NotControllable(CapvolError):
    pass


class IllConditioned(CapvolError):
    """Controllability matrix too ill-conditioned to invert reliably."""


class ComplexSpectrum(CapvolError):
    """A real-spectrum route received non-real eigenvalues."""


class PreconditionViolated(CapvolError):
    pass


class NotHurwitzStable(CapvolError):
    pass


class BudgetExceeded(CapvolError):
    """Combinatorial enumeration would exceed its budget."""


class ParseError(CapvolError):
    pass


class DimensionMismatch(CapvolError):
    pass
