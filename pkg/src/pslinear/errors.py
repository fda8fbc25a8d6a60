"""Exception types shared across the package."""


class PsLinearError(Exception):
    """Base class for all errors raised by pslinear."""


class InvalidParams(PsLinearError, ValueError):
    pass


class PrecisionOverflow(PsLinearError, ArithmeticError):
    """A decision could not be certified below the precision cap."""

    def __init__(self, message, *, prec=None, index=None):
        super().__init__(message)
        self.prec = prec
        self.index = index


class NotMember(PsLinearError, LookupError):
    pass


class NotSolvableInN(PsLinearError, ValueError):
    pass


class EmptyInterval(PsLinearError, ValueError):
    pass


class AmbiguousOrdering(PsLinearError, ArithmeticError):
    def __init__(self, message, *, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class NoSolutionFound(PsLinearError):
    """Search budget ran out before any pair was verified.

    This is a budget report, not a claim that no solution exists.
    """

    def __init__(self, message, *, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceeded(PsLinearError, MemoryError):
    pass
