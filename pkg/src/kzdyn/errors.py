"""Exception hierarchy shared by the whole package."""


class KzdynError(Exception):
    """Base class for every error raised by kzdyn."""


class SingularMatrix(KzdynError, ZeroDivisionError):
    pass


class NonClearingDenominator(KzdynError, ValueError):
    pass


class FractionalExponent(KzdynError, ValueError):
    pass


class InvalidCartanType(KzdynError, ValueError):
    pass


class NotMinuscule(KzdynError, ValueError):
    pass


class NotInOStar(KzdynError, ValueError):
    pass


class MixedRank(KzdynError, ValueError):
    pass


class EmptyWeightSpace(KzdynError, ValueError):
    pass


class PoleError(KzdynError, ZeroDivisionError):
    """A denominator vanished while evaluating at a supposedly generic point."""

    def __init__(self, message, weight=None, j=None):
        super().__init__(message)
        self.weight = weight
        self.j = j


class PoleAtOne(PoleError):
    pass


class ResonantLambda(PoleError):
    pass


class CoincidingPoints(KzdynError, ValueError):
    pass


class TruncationTooShallow(KzdynError, ValueError):
    pass


class NonGenericWeight(KzdynError, ValueError):
    pass


class NoIntegerSolution(KzdynError, ValueError):
    pass


class ConfigError(KzdynError, ValueError):
    pass
