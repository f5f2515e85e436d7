from fractions import Fraction as Rational

import pytest

from minkowski.errors import DomainError
from minkowski.exact_arithmetic import (HALF, IDENTITY, M0, M1, ONE, ZERO, Fraction, UnimodularMap,
                                        apply, compose, farey_det, generator, mediant)


def F(text):
    return Fraction.parse(text)


class TestFraction:
    def test_reduces_to_lowest_terms(self):
        f = Fraction(6, 8)
        assert (f.num, f.den) == (3, 4)

    @pytest.mark.parametrize("num,den", [(3, 2), (-1, 2), (1, 0), (1, -3)])
    def test_rejects_values_outside_unit_interval(self, num, den):
        with pytest.raises(DomainError):
            Fraction(num, den)

    def test_rejects_non_integers(self):
        with pytest.raises(DomainError):
            Fraction(0.5, 1)

    def test_parse_and_str(self):
        assert str(F("2/6")) == "1/3"
        assert F("1") == ONE
        assert F(" 0 ") == ZERO
        with pytest.raises(DomainError):
            F("a/b")

    def test_ordering_by_cross_multiplication(self):
        assert F("1/3") < F("1/2") < F("2/3")
        assert sorted([F("2/3"), F("0/1"), F("1/2")]) == [ZERO, HALF, F("2/3")]
        assert F("2/4") == HALF

    def test_conversions(self):
        assert float(F("1/4")) == 0.25
        assert F("3/7").to_rational() == Rational(3, 7)
        assert Fraction.from_rational(Rational(10, 15)) == F("2/3")

    def test_fractions_are_immutable(self):
        with pytest.raises(AttributeError):
            HALF.num = 3


class TestMediantAndDeterminant:
    @pytest.mark.parametrize("f,g,expected", [
        ("0/1", "1/1", "1/2"),
        ("1/3", "1/2", "2/5"),
        ("1/2", "1/1", "2/3"),
    ])
    def test_mediant(self, f, g, expected):
        assert mediant(F(f), F(g)) == F(expected)

    def test_mediant_of_non_neighbours_is_reduced(self):
        # (1 + 1) / (3 + 3)
        assert mediant(F("1/3"), F("1/3")) == F("1/3")

    @pytest.mark.parametrize("f,g,expected", [
        ("0/1", "1/1", 1),
        ("1/3", "1/2", 1),
        ("1/3", "2/3", 3),
    ])
    def test_farey_det(self, f, g, expected):
        assert farey_det(F(f), F(g)) == expected


class TestMaps:
    def test_generators(self):
        assert generator(0) == M0
        assert generator(1) == M1
        with pytest.raises(DomainError):
            generator(2)

    def test_determinants(self):
        assert M0.det == 1
        assert M1.det == 1
        assert str(M1) == "[[0,1],[-1,2]]"

    def test_compose_with_identity(self):
        assert compose(IDENTITY, M0) == M0
        assert compose(M1, IDENTITY) == M1

    def test_compose_order(self):
        assert apply(compose(M0, M1), ZERO) == F("1/3")
        assert apply(compose(M1, M0), ZERO) == HALF

    def test_apply_generators(self):
        assert apply(M0, ONE) == HALF
        assert apply(M1, ZERO) == HALF
        assert apply(M0, ZERO) == ZERO
        assert M1(ONE) == ONE

    def test_word_01_maps_unit_interval_onto_farey_pair(self):
        m = compose(M0, M1)
        assert (apply(m, ZERO), apply(m, ONE)) == (F("1/3"), HALF)

    def test_from_endpoints_recovers_map(self):
        m = UnimodularMap.from_endpoints(F("1/3"), HALF)
        assert m == compose(M0, M1)
        assert m.det == 1

    def test_apply_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            apply(M0, 0.5)
        with pytest.raises(DomainError):
            apply(UnimodularMap(2, 0, 0, 1), F("3/4"))
