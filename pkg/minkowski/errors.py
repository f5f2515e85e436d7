"""
Exception hierarchy
All errors raised by the library derive from MinkowskiError
"""


class MinkowskiError(Exception):
    """Base class for library errors"""


class DomainError(MinkowskiError, ValueError):
    """Argument outside the domain of an operation"""


class BudgetExceededError(MinkowskiError, ValueError):
    """A materialisation budget would be exceeded"""


class SearchLimitError(MinkowskiError, RuntimeError):
    """A bounded search ran past its cap"""


class ToleranceNotReachedError(MinkowskiError, RuntimeError):
    """Quadrature could not reach the requested tolerance within its budget"""


class NumericalInstabilityError(MinkowskiError, ArithmeticError):
    """Floating point continued fraction extraction became unreliable"""


class ResolutionExhaustedError(MinkowskiError, ArithmeticError):
    """Recurrence coefficients lost positivity on a discrete measure"""
