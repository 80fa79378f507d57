import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from matconvex.ddouble import DD, dd_exp, dd_log, dd_pow, two_prod, two_sum

# double-double error bounds hold away from underflow and overflow
magnitude = st.floats(1e-100, 1e6)
finite = st.one_of(st.just(0.0), magnitude, magnitude.map(lambda v: -v))
positive = st.floats(1e-3, 1e3)


def exact(d: DD) -> Fraction:
    return Fraction(d.hi) + Fraction(d.lo)


def exp_series(x: Fraction, terms: int = 80) -> Fraction:
    # rational Taylor series; |x| <= 4 keeps the tail far below 2^-110
    total, term = Fraction(0), Fraction(1)
    for k in range(terms):
        total += term
        term = term * x / (k + 1)
    return total


def rel(a: Fraction, b: Fraction) -> float:
    return float(abs(a - b) / abs(b)) if b else float(abs(a))


@given(a=finite, b=finite)
def test_error_free_transforms_are_exact(a, b):
    s, e = two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)
    p, e = two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


@given(a=finite, b=finite, c=finite, d=finite)
def test_arithmetic_matches_rationals(a, b, c, d):
    x, y = DD(a) + b, DD(c) + d
    assert abs(exact(x + y) - exact(x) - exact(y)) <= 2.0 ** -100 * (abs(exact(x)) + abs(exact(y)))
    assert rel(exact(x * y), exact(x) * exact(y)) <= 2.0 ** -100
    if exact(y) != 0:
        assert rel(exact(x / y), exact(x) / exact(y)) <= 2.0 ** -100


@given(x=st.fractions(min_value=-4, max_value=4, max_denominator=1000))
@settings(max_examples=50, deadline=None)
def test_exp_against_rational_series(x):
    d = DD(float(x))
    assert rel(exact(dd_exp(d)), exp_series(Fraction(float(x)))) <= 2.0 ** -98


@given(x=positive)
@settings(max_examples=100, deadline=None)
def test_log_inverts_exp(x):
    y = dd_log(DD(x))
    assert rel(exact(dd_exp(y)), Fraction(x)) <= 2.0 ** -98


@given(x=positive, p=st.floats(-3, 3))
@settings(max_examples=100, deadline=None)
def test_pow_agrees_with_double_to_double_rounding(x, p):
    assert float(dd_pow(DD(x), p)) == pytest.approx(x ** p, rel=4e-16 * max(1.0, abs(p * math.log(x))))


def test_integer_power_is_exact_product():
    assert exact(DD(3.0) ** 5) == 243
    assert exact(DD(2.0) ** -3) == Fraction(1, 8)


def test_comparisons_and_conversion():
    a = DD(1.0) + 2.0 ** -80
    assert a > 1.0 and float(a) == 1.0
    assert DD(0.0) == 0.0 and not DD(0.0)
    with pytest.raises(ValueError):
        dd_log(DD(-1.0))
