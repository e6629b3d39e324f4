"""Scalar polynomial ring over (beta, D, C)."""

from fractions import Fraction

from celalg.scalar import (
    s_add,
    s_beta,
    s_equal,
    s_format,
    s_is_zero,
    s_monomial,
    s_mul,
    s_neg,
    s_rational,
    s_scale,
    s_substitute,
    s_zero,
)


def test_zero_and_constants():
    assert s_zero() == {}
    assert s_is_zero(s_rational(0))
    assert s_rational(3) == {(0, 0, 0): 3}
    assert s_monomial((1, 0, 0), 0) == {}


def test_add_cancellation():
    x = s_monomial((2, 0, 0), Fraction(1, 2))
    y = s_monomial((2, 0, 0), Fraction(-1, 2))
    assert s_add(x, y) == {}
    assert s_add(x, s_rational(1)) == {(2, 0, 0): Fraction(1, 2), (0, 0, 0): 1}


def test_mul_exponent_addition():
    b = s_beta()
    assert s_mul(b, b) == {(2, 0, 0): 1}
    d = s_monomial((0, 1, 0), 3)
    assert s_mul(b, d) == {(1, 1, 0): 3}
    assert s_mul(b, s_zero()) == {}


def test_neg_scale_equal():
    x = s_add(s_beta(), s_rational(2))
    assert s_neg(x) == s_scale(x, -1)
    assert s_scale(x, 0) == {}
    assert s_equal(x, dict(x)) and not s_equal(x, s_beta())


def test_substitute():
    # beta^2 D + 3 C at beta = 2 -> 4 D + 3 C
    x = {(2, 1, 0): 1, (0, 0, 1): 3}
    assert s_substitute(x, beta=2) == {(0, 1, 0): 4, (0, 0, 1): 3}
    assert s_substitute(x, beta=2, d=Fraction(1, 4), c=1) == {(0, 0, 0): 4}
    # collapsing exponents may cancel
    y = {(2, 0, 0): 1, (0, 0, 0): -4}
    assert s_substitute(y, beta=2) == {}


def test_format_stable():
    x = {(2, 0, 0): Fraction(-1, 8), (0, 0, 1): Fraction(3, 16), (0, 1, 0): 1}
    assert s_format(x) == "3/16*C + D - 1/8*beta^2"
    assert s_format({}) == "0"
    assert s_format(s_beta()) == "beta"
    assert s_format(s_monomial((1, 0, 0), -1)) == "-beta"
