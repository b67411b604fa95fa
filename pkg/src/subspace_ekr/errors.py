"""Exception types raised across the package."""


class SubspaceEKRError(Exception):
    """Base class for every error raised by this package."""


class NotPrimePower(SubspaceEKRError, ValueError):
    pass


class UnsupportedOrder(SubspaceEKRError, ValueError):
    pass


class InvalidFieldOrder(SubspaceEKRError, ValueError):
    pass


class DivisionByZero(SubspaceEKRError, ZeroDivisionError):
    pass


class DimensionMismatch(SubspaceEKRError, ValueError):
    pass


class AmbientMismatch(SubspaceEKRError, ValueError):
    pass


class DimensionOutOfRange(SubspaceEKRError, ValueError):
    pass


class NotInSpace(SubspaceEKRError, ValueError):
    pass


class NotAffine(SubspaceEKRError, ValueError):
    pass


class HypothesisViolation(SubspaceEKRError, ValueError):
    """Parameters fall outside the hypotheses under which a formula or lemma is stated."""


class FormUnavailable(SubspaceEKRError, ValueError):
    pass


class DivisibilityViolation(SubspaceEKRError, ArithmeticError):
    """A division that must be exact left a remainder (signals a transcription bug)."""


class BadAnchors(SubspaceEKRError, ValueError):
    pass


class NotIntersecting(SubspaceEKRError, ValueError):
    pass


class EmptyFamily(SubspaceEKRError, ValueError):
    pass


class ParseError(SubspaceEKRError, ValueError):
    pass


class InvariantViolation(SubspaceEKRError, ValueError):
    pass


class TooLarge(SubspaceEKRError, ValueError):
    pass


class UnknownLemma(SubspaceEKRError, KeyError):
    pass


class EmptyGrid(SubspaceEKRError, ValueError):
    pass
