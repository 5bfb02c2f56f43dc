"""Exception hierarchy shared by every module of the package."""


class LrConcError(Exception):
    """Base class for all package errors."""


class DomainError(LrConcError, ValueError):
    """A probability argument lies outside the open unit interval."""


class UnsupportedFamily(LrConcError, ValueError):
    """The distribution family does not support the requested transform."""


class UnsupportedPair(LrConcError, ValueError):
    """No closed form exists for this distribution pair."""


class PairOrderError(UnsupportedPair):
    """Exponential pair given with the rates in the wrong order."""


class SupportError(LrConcError, ValueError):
    """A point lies outside the support, or two supports do not coincide."""


class AtomError(LrConcError):
    """The likelihood-ratio distribution has an atom.

    Attributes:
        tie_fraction: Fraction of tied likelihood-ratio values that
            triggered the error (1.0 for an exactly constant ratio).
    """

    def __init__(self, message: str, tie_fraction: float = 1.0):
        super().__init__(message)
        self.tie_fraction = tie_fraction


class AtomWarning(UserWarning):
    """Emitted instead of AtomError when atom checking is lenient."""


class NoConvergence(LrConcError, ArithmeticError):
    """An iterative routine exhausted its budget before reaching tolerance."""


class BadBracket(LrConcError, ValueError):
    """Root bracket endpoints do not straddle a sign change."""


class NoBracket(LrConcError, ArithmeticError):
    """Bracket expansion did not find a sign change."""


class ParseError(LrConcError, ValueError):
    """A distribution literal or score file could not be parsed."""
