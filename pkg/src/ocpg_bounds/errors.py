"""Exception hierarchy shared by all modules."""


class OcpgError(Exception):
    """Base class for every error raised by this package."""


class NotADiscriminant(OcpgError, ValueError):
    pass


class NotPositiveDefinite(OcpgError, ValueError):
    pass


class DiscriminantMismatch(OcpgError, ValueError):
    pass


class GenusCrossCheckFailed(OcpgError, AssertionError):
    """Ambiguous-class count disagrees with 2^(omega-1) for a fundamental discriminant."""


class NegativeInput(OcpgError, ValueError):
    pass


class NonpositiveInput(OcpgError, ValueError):
    pass


class DivisionByIntervalContainingZero(OcpgError, ZeroDivisionError):
    pass


class NotFundamental(OcpgError, ValueError):
    pass


class NonIntegralResult(OcpgError, ArithmeticError):
    """The class number formula produced a non-integer; indicates a bug."""


class NoCutoffFound(OcpgError):
    pass


class Indeterminate(OcpgError):
    """Enclosures still overlap after the refinement budget was spent."""
