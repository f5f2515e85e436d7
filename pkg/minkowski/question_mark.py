"""
Question mark function
Exact evaluation of ?(x) on rationals through continued fractions, approximate
evaluation on floats, inversion on dyadic rationals and μ-measures of intervals
"""

import functools
import math
import sys
from dataclasses import dataclass
from fractions import Fraction as Rational
from typing import Sequence, Tuple

from .errors import DomainError, NumericalInstabilityError
from .exact_arithmetic import ONE, ZERO, Fraction, apply, generator


@dataclass(frozen=True)
class ContinuedFraction:
    """Terms [n_1, ..., n_k] of x = 1/(n_1 + 1/(n_2 + ...)); empty encodes 0"""
    terms: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))
        if any((not isinstance(t, int)) or t < 1 for t in self.terms):
            raise DomainError(f"continued fraction terms must be positive integers: {self.terms}")

    @property
    def is_canonical(self) -> bool:
        return len(self.terms) < 2 or self.terms[-1] >= 2

    def canonical(self) -> 'ContinuedFraction':
        """Fold a trailing 1 into the previous term: [..., n, 1] -> [..., n+1]"""
        if self.is_canonical:
            return self
        return ContinuedFraction(self.terms[:-2] + (self.terms[-2] + 1,))

    def value(self) -> Fraction:
        num, den = 0, 1
        for t in reversed(self.terms):
            # x -> 1 / (t + x)
            num, den = den, t * den + num
        return Fraction(num, den)

    def partial_sums(self) -> Tuple[int, ...]:
        sums, running = [], 0
        for t in self.terms:
            running += t
            sums.append(running)
        return tuple(sums)


@functools.total_ordering
@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2**exponent in [0,1], kept in lowest terms"""
    numerator: int
    exponent: int

    def __post_init__(self):
        if self.exponent < 0 or self.numerator < 0:
            raise DomainError(f"invalid dyadic rational {self.numerator}/2^{self.exponent}")
        if self.numerator > (1 << self.exponent):
            raise DomainError(f"dyadic rational above 1: {self.numerator}/2^{self.exponent}")
        if self.numerator == 0:
            object.__setattr__(self, 'exponent', 0)
            return
        trailing = (self.numerator & -self.numerator).bit_length() - 1
        shift = min(trailing, self.exponent)
        if shift:
            object.__setattr__(self, 'numerator', self.numerator >> shift)
            object.__setattr__(self, 'exponent', self.exponent - shift)

    @classmethod
    def parse(cls, text: str) -> 'DyadicRational':
        """Parse "m/2^k", "m/q" with q a power of two, or "0" / "1" """
        text = text.strip()
        try:
            if '/2^' in text:
                num, exp = text.split('/2^', 1)
                return cls(int(num), int(exp))
            value = Rational(text)
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"cannot parse dyadic rational {text!r}: {e}") from e
        den = value.denominator
        if den & (den - 1):
            raise DomainError(f"{text!r} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    def _aligned(self, other: 'DyadicRational') -> Tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __lt__(self, other: 'DyadicRational') -> bool:
        if not isinstance(other, DyadicRational):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a < b

    def __sub__(self, other: 'DyadicRational') -> 'DyadicRational':
        if not isinstance(other, DyadicRational):
            return NotImplemented
        a, b, e = self._aligned(other)
        if a < b:
            raise DomainError(f"negative difference {self} - {other}")
        return DyadicRational(a - b, e)

    def __float__(self) -> float:
        return self.numerator / (1 << self.exponent)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"

    def to_rational(self) -> Rational:
        return Rational(self.numerator, 1 << self.exponent)

    def digits(self) -> str:
        """Binary digits after the point, padded to the exponent (most significant first)"""
        if self.exponent == 0:
            return ''
        return format(self.numerator, 'b').zfill(self.exponent)


def cf_of_rational(x: Fraction) -> ContinuedFraction:
    """Euclidean expansion of x in [0,1]; canonical (last term >= 2 when k >= 2)"""
    terms = []
    num, den = x.num, x.den
    while num:
        t, r = divmod(den, num)
        terms.append(t)
        den, num = num, r
    return ContinuedFraction(tuple(terms))


def qm_of_terms(terms: Sequence[int]) -> DyadicRational:
    """Alternating series sum_j (-1)^(j+1) 2^(-N_j + 1) over partial sums N_j"""
    cf = terms if isinstance(terms, ContinuedFraction) else ContinuedFraction(tuple(terms))
    sums = cf.partial_sums()
    if not sums:
        return DyadicRational(0, 0)
    exponent = sums[-1] - 1
    total = 0
    for j, n_j in enumerate(sums):
        term = 1 << (exponent - n_j + 1)
        total += term if j % 2 == 0 else -term
    return DyadicRational(total, exponent)


def qm_rational(x: Fraction) -> DyadicRational:
    """Exact ?(x) for rational x in [0,1]"""
    return qm_of_terms(cf_of_rational(x))


def qm_real(x: float, eps: float) -> float:
    """
    Approximate ?(x) for a float x in [0,1] within eps

    Partial quotients are extracted by floor/reciprocal in floating point and
    the series is cut once the remaining tail is below eps. The rounding
    error of the remainder is tracked; it grows roughly like 1/x² per step,
    so eps much below 1e-9 is out of reach for badly approximable x.

    Raises:
        NumericalInstabilityError: the next reciprocal would be taken of a
            remainder below 4 times its own rounding error while the tail
            still exceeds eps
    """
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"argument outside [0,1]: {x}")
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    unit = sys.float_info.epsilon / 2
    err = unit * x
    target = -math.log2(eps)
    total = 0.0
    partial = 0
    sign = 1.0
    while True:
        if x <= 4.0 * err:
            if x + err == 0.0:
                break
            # the next partial sum is at least partial + 1/(x + err) - 1
            if partial + 1.0 / (x + err) - 2.0 > target:
                break
            raise NumericalInstabilityError(
                f"continued fraction extraction unreliable after partial sum {partial}")
        t = 1.0 / x
        n = math.floor(t)
        err = err / (x * (x - err)) + unit * t
        x = t - n
        partial += n
        total += sign * 2.0 ** (1 - partial)
        sign = -sign
        if partial - 1 > target:
            break
    return total


def qm_inverse_dyadic(y: DyadicRational) -> Fraction:
    """The rational x with ?(x) = y, computed as M_σ(0) for σ the binary digits of y"""
    if y.numerator == 1 and y.exponent == 0:
        return ONE
    x = ZERO
    for bit in reversed(y.digits()):
        x = apply(generator(int(bit)), x)
    return x


def measure_interval(a: Fraction, b: Fraction) -> DyadicRational:
    """μ([a, b]) = ?(b) - ?(a)"""
    if b < a:
        raise DomainError(f"empty interval: {a} > {b}")
    return qm_rational(b) - qm_rational(a)


def dyadic_map(i: int, y: DyadicRational) -> DyadicRational:
    """P_0(y) = y/2, P_1(y) = (y+1)/2"""
    if i == 0:
        return DyadicRational(y.numerator, y.exponent + 1)
    if i == 1:
        return DyadicRational(y.numerator + (1 << y.exponent), y.exponent + 1)
    raise DomainError(f"map index must be 0 or 1, got {i!r}")
