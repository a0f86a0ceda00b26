from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cyclic_hall.laurent import (
    ONE,
    V,
    ZERO,
    LaurentInt,
    format_qpoly,
    gaussian_binomial,
    parse_qpoly,
    poly_eval,
    poly_in_v,
)

laurents = st.dictionaries(st.integers(-6, 6), st.integers(-20, 20), max_size=5).map(LaurentInt)


def test_no_zero_coefficients_stored():
    assert LaurentInt({1: 0, 2: 3}).terms == ((2, 3),)
    assert LaurentInt({0: 1}) - ONE == ZERO


def test_value_at_one():
    assert (V + V**-1).at_one() == 2


def test_bar_and_positive_part():
    x = LaurentInt({-2: 1, 0: 4, 3: -1})
    assert x.bar() == LaurentInt({2: 1, 0: 4, -3: -1})
    assert x.positive_part() == LaurentInt({3: -1})


def test_evaluate_is_exact():
    assert LaurentInt({-1: 3, 1: 1}).evaluate(2) == Fraction(7, 2)


def test_negative_power_only_for_units():
    assert (V.shift(2) * -1) ** -1 == LaurentInt({-3: -1})
    with pytest.raises(ValueError):
        (V + ONE) ** -1


def test_serialization_forms():
    assert LaurentInt({-1: 2, 0: 1}).serialize() == "(-1:2)(0:1)"
    assert ZERO.serialize() == "0"
    with pytest.raises(ValueError):
        LaurentInt.parse("(1:2")


@given(laurents)
def test_serialize_roundtrip(x):
    assert LaurentInt.parse(x.serialize()) == x


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(laurents, laurents)
def test_bar_is_a_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()


def test_gaussian_binomials():
    assert gaussian_binomial(2, 1) == [1, 1]
    assert gaussian_binomial(4, 2) == [1, 1, 2, 1, 1]
    assert gaussian_binomial(3, 4) == []


@pytest.mark.parametrize("n", range(6))
def test_gaussian_binomial_at_one_is_binomial(n):
    from math import comb

    for k in range(n + 1):
        assert poly_eval(gaussian_binomial(n, k), 1) == comb(n, k)


def test_qpoly_grammar():
    assert format_qpoly([1, 1]) == "1+1*q"
    assert format_qpoly([0, 0, 1]) == "0+1*q^2"
    assert format_qpoly([]) == "0"
    assert parse_qpoly("1+1*q") == [1, 1]
    with pytest.raises(ValueError):
        parse_qpoly("q+")


@given(st.lists(st.integers(-5, 5), max_size=5))
def test_qpoly_roundtrip(coeffs):
    from cyclic_hall.laurent import poly_trim

    assert parse_qpoly(format_qpoly(coeffs)) == poly_trim(coeffs)


def test_substitution():
    assert poly_in_v([1, 1], -2) == LaurentInt({0: 1, -2: 1})
