"""Exception hierarchy shared by every gentrig module."""


class GentrigError(Exception):
    """Base class for all library errors."""


class InvalidInterval(GentrigError, ValueError):
    pass


class NonIntegrable(GentrigError, ValueError):
    pass


class NonConvergence(GentrigError, ArithmeticError):
    """Quadrature or root search stopped before reaching its tolerance.

    The best available result is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DomainError(GentrigError, ValueError):
    pass


class DivergentEndpoint(DomainError):
    """The defining integral diverges at the requested endpoint."""


class PoleError(DomainError):
    pass


class BoundaryProximity(DomainError):
    """Evaluation point too close to a singular boundary for reliable numbers."""


class UnsupportedFamily(GentrigError, ValueError):
    pass


class NoSignChange(GentrigError):
    """A bisection target never changes sign over the searched interval."""


class BracketOverflow(GentrigError, OverflowError):
    pass
