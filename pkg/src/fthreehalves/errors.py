"""Exception hierarchy shared by every module of the package."""


class F32Error(Exception):
    """Base class for all errors raised by :mod:`fthreehalves`."""


# exact arithmetic
class NotSixAdic(F32Error, ValueError):
    """A value left Z[1/6]: its reduced denominator has a prime factor other than 2, 3."""


class ZeroDenominator(F32Error, ZeroDivisionError):
    pass


class ZeroInput(F32Error, ValueError):
    pass


# maps and diagrams
class OutOfDomain(F32Error, ValueError):
    pass


class InvalidMap(F32Error, ValueError):
    pass


class NotRepresentable(F32Error, ValueError):
    pass


class CannotBalance(F32Error, ValueError):
    pass


class NotBalanced(F32Error, ValueError):
    pass


class NotMember(F32Error, ValueError):
    """The element is not in F(3/2); ``criterion`` names the violated rule."""

    def __init__(self, message, criterion=None):
        super().__init__(message)
        self.criterion = criterion


# anatomy and rewriting moves
class DepthMismatch(F32Error, ValueError):
    pass


class PatternMismatch(F32Error, ValueError):
    pass


class NothingToSwap(F32Error, ValueError):
    pass


class LegsSymmetric(F32Error, ValueError):
    pass


class LegsAsymmetric(F32Error, ValueError):
    pass


class LegsTooShort(F32Error, ValueError):
    pass


class NotHumanoid(F32Error, ValueError):
    pass


class NotSerpent(F32Error, ValueError):
    pass


class NotCentipede(F32Error, ValueError):
    pass


class SchemaCheckFailed(F32Error, AssertionError):
    """An instantiated rewrite rule did not multiply out to its left-hand side."""


class BudgetExceeded(F32Error, RuntimeError):
    pass


class ParseError(F32Error, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class InvalidTreePair(F32Error, ValueError):
    """Malformed tree or a pair whose trees have different leaf counts."""
