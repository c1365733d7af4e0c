from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given

from fthreehalves.errors import NotSixAdic, ZeroDenominator, ZeroInput
from fthreehalves.exactnum import ONE, ZERO, SixAdic, is_smooth, make, parse, valuations

from conftest import six_adics


def test_construction_reduces():
    assert make(4, 6) == SixAdic(2, 3)
    assert (make(4, 6).num, make(4, 6).den) == (2, 3)


def test_sign_moves_to_numerator():
    x = make(-2, -4)
    assert (x.num, x.den) == (1, 2)
    y = make(3, -9)
    assert (y.num, y.den) == (-1, 3)


def test_rejects_other_primes():
    with pytest.raises(NotSixAdic):
        make(1, 5)
    with pytest.raises(NotSixAdic):
        make(3, 14)


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        make(1, 0)


def test_arithmetic_examples():
    assert SixAdic(1, 2) + SixAdic(1, 3) == SixAdic(5, 6)
    assert SixAdic(9, 4) * SixAdic(2, 9) == SixAdic(1, 2)
    assert SixAdic(1, 2) - SixAdic(1, 3) == SixAdic(1, 6)
    assert SixAdic(1, 3) / SixAdic(2, 1) == SixAdic(1, 6)


def test_division_leaving_the_ring():
    with pytest.raises(NotSixAdic):
        SixAdic(1) / SixAdic(5)
    with pytest.raises(ZeroDenominator):
        SixAdic(1) / ZERO


def test_valuations():
    assert valuations(SixAdic(1, 12)) == (2, 1)
    assert valuations(SixAdic(2, 9)) == (-1, 2)
    assert valuations(ONE) == (0, 0)
    with pytest.raises(ZeroInput):
        valuations(ZERO)


def test_is_smooth():
    assert [n for n in range(1, 20) if is_smooth(n)] == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]


def test_text_and_json_round_trip():
    x = SixAdic(-7, 72)
    assert str(x) == "-7/72"
    assert parse(str(x)) == x
    assert SixAdic.from_json(x.to_json()) == x
    assert x.to_json() == ["-7", "72"]
    assert str(SixAdic(3)) == "3"


@given(six_adics(), six_adics(), six_adics())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(six_adics(), six_adics())
def test_stored_canonically(a, b):
    for x in (a + b, a * b, a - b):
        assert x.den > 0 and gcd(x.num, x.den) == 1 and is_smooth(x.den)


@given(six_adics(), six_adics())
def test_order_matches_fractions(a, b):
    fa, fb = Fraction(a.num, a.den), Fraction(b.num, b.den)
    assert (a < b) == (fa < fb)
    assert (a == b) == (fa == fb)
    assert hash(a) == hash(fa)


@given(six_adics())
def test_valuations_recompose(a):
    if a == ZERO:
        return
    v2, v3 = valuations(a)
    q = Fraction(a.num, a.den) * Fraction(2) ** v2 * Fraction(3) ** v3
    assert q.denominator == 1 and q.numerator % 2 and q.numerator % 3
