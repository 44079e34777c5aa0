"""Exception hierarchy shared by every tailix module."""


class TailixError(Exception):
    """Base class for all library errors."""


class NonPositiveValue(TailixError, ValueError):
    """An observation was zero or negative."""


class IndexOutOfRange(TailixError, IndexError):
    pass


class KOutOfRange(TailixError, ValueError):
    """Number of upper order statistics k outside the admissible range."""


class DegenerateDenominator(TailixError, ArithmeticError):
    """An estimator denominator vanished (typically log X_{n-k:n} = 0)."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class DegenerateMoments(TailixError, ArithmeticError):
    """Moment-estimator correction term is undefined."""


class NonMonotoneTail(TailixError, ValueError):
    pass


class DomainError(TailixError, ValueError):
    pass


class TooManyDegenerate(TailixError, RuntimeError):
    """Too many Monte Carlo replications hit a degenerate denominator."""


class ParseError(TailixError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyAfterFilter(TailixError, ValueError):
    pass
