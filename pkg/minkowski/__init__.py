"""
minkowski
Exact partitions of the question mark measure and finite-level regularity
certificates
"""

from .errors import (BudgetExceededError, DomainError, MinkowskiError, NumericalInstabilityError,
                     ResolutionExhaustedError, SearchLimitError, ToleranceNotReachedError)
from .exact_arithmetic import Fraction, UnimodularMap, apply, compose, farey_det, mediant
from .partition import IfsInterval, Word, enumerate_level, interval_of_word, stern_brocot
from .question_mark import DyadicRational, qm_inverse_dyadic, qm_rational, qm_real
from .regularity import large_census, lambda_star_lower, prop1_pipeline
from .spectral import integrate, kinney_dimension, recurrence_coeffs

__version__ = "1.0.0"
