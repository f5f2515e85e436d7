"""
Exact arithmetic
Irreducible fractions in [0,1], Farey sums and unimodular Möbius maps
"""

import functools
from dataclasses import dataclass
from fractions import Fraction as Rational
from math import gcd

from .config import ARITHMETIC_CONFIG
from .errors import DomainError


@functools.total_ordering
@dataclass(frozen=True)
class Fraction:
    """Irreducible fraction num/den in [0,1] with unbounded integers"""
    num: int
    den: int

    def __post_init__(self):
        if not isinstance(self.num, int) or not isinstance(self.den, int):
            raise DomainError(f"fraction parts must be integers: {self.num!r}/{self.den!r}")
        if self.den <= 0:
            raise DomainError(f"denominator must be positive: {self.num}/{self.den}")
        if self.num < 0 or self.num > self.den:
            raise DomainError(f"fraction outside [0,1]: {self.num}/{self.den}")
        g = gcd(self.num, self.den)
        if g != 1:
            object.__setattr__(self, 'num', self.num // g)
            object.__setattr__(self, 'den', self.den // g)

    @classmethod
    def unchecked(cls, num: int, den: int) -> 'Fraction':
        """Build without reduction; callers guarantee gcd(num, den) = 1 (Farey neighbours)"""
        obj = object.__new__(cls)
        object.__setattr__(obj, 'num', num)
        object.__setattr__(obj, 'den', den)
        if ARITHMETIC_CONFIG['debug_checks']:
            assert den > 0 and 0 <= num <= den and gcd(num, den) == 1, f"{num}/{den}"
        return obj

    @classmethod
    def parse(cls, text: str) -> 'Fraction':
        """Parse "p/q" (or a bare integer 0 or 1)"""
        text = text.strip()
        try:
            if '/' in text:
                num, den = text.split('/', 1)
                return cls(int(num), int(den))
            return cls(int(text), 1)
        except ValueError as e:
            raise DomainError(f"cannot parse fraction {text!r}: {e}") from e

    @classmethod
    def from_rational(cls, value: Rational) -> 'Fraction':
        return cls(value.numerator, value.denominator)

    def __lt__(self, other: 'Fraction') -> bool:
        if not isinstance(other, Fraction):
            return NotImplemented
        return self.num * other.den < other.num * self.den

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def to_rational(self) -> Rational:
        return Rational(self.num, self.den)


@dataclass(frozen=True)
class UnimodularMap:
    """Integer 2x2 matrix acting as x -> (a x + b) / (c x + d)"""
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def from_endpoints(cls, left: Fraction, right: Fraction) -> 'UnimodularMap':
        """Map sending 0 to left and 1 to right, for Farey neighbours left < right"""
        return cls(right.num - left.num, left.num, right.den - left.den, left.den)

    def __call__(self, x: Fraction) -> Fraction:
        return apply(self, x)

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = UnimodularMap(1, 0, 0, 1)
# M_0(x) = x / (x + 1), M_1(x) = 1 / (2 - x)
M0 = UnimodularMap(1, 0, 1, 1)
M1 = UnimodularMap(0, 1, -1, 2)

ZERO = Fraction.unchecked(0, 1)
ONE = Fraction.unchecked(1, 1)
HALF = Fraction.unchecked(1, 2)


def generator(i: int) -> UnimodularMap:
    """Return M_0 or M_1"""
    if i == 0:
        return M0
    if i == 1:
        return M1
    raise DomainError(f"generator index must be 0 or 1, got {i!r}")


def mediant(f: Fraction, g: Fraction) -> Fraction:
    """Farey sum (f.num + g.num) / (f.den + g.den)"""
    num, den = f.num + g.num, f.den + g.den
    if farey_det(f, g) == 1:
        return Fraction.unchecked(num, den)
    return Fraction(num, den)


def farey_det(f: Fraction, g: Fraction) -> int:
    """g.num * f.den - g.den * f.num; equals 1 for Farey neighbours f < g"""
    return g.num * f.den - g.den * f.num


def compose(m1: UnimodularMap, m2: UnimodularMap) -> UnimodularMap:
    """Matrix product, i.e. the map m1 ∘ m2"""
    result = UnimodularMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )
    assert result.det == m1.det * m2.det
    return result


def apply(m: UnimodularMap, x: Fraction) -> Fraction:
    """Evaluate m at x in [0,1] exactly"""
    if not isinstance(x, Fraction):
        raise DomainError(f"expected a Fraction in [0,1], got {x!r}")
    if x.num < 0 or x.num > x.den:
        raise DomainError(f"argument outside [0,1]: {x}")
    num = m.a * x.num + m.b * x.den
    den = m.c * x.num + m.d * x.den
    if den <= 0:
        raise DomainError(f"map {m} has a non-positive denominator at {x}")
    if num < 0 or num > den:
        raise DomainError(f"map {m} sends {x} outside [0,1]")
    if m.det == 1:
        # unimodular maps send reduced fractions to reduced fractions
        return Fraction.unchecked(num, den)
    return Fraction(num, den)
