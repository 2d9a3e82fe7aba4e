"""Exception types raised across the package."""


class QsepError(ValueError):
    """Base class for all domain errors."""


class LengthMismatch(QsepError):
    pass


class OddN(QsepError):
    pass


class Overflow(QsepError):
    pass


class LocalityExceeded(QsepError):
    pass


class NotPolynomial(QsepError):
    pass


class TooLarge(QsepError):
    pass


class SymmetryBroken(QsepError):
    pass


class NoUniqueMinimum(QsepError):
    pass


class InconsistentOracle(QsepError):
    pass
