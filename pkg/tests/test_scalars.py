from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from afav.errors import PrecisionError
from afav.scalars import RationalInterval, as_rational, format_decimal, format_scalar, hull, parse_scalar

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@st.composite
def intervals(draw):
    a, b = draw(rationals), draw(rationals)
    return RationalInterval(min(a, b), max(a, b))


def test_addition_example():
    x = RationalInterval(Fraction(1, 3), Fraction(1, 2))
    y = RationalInterval(Fraction(1, 6))
    assert x + y == RationalInterval(Fraction(1, 2), Fraction(2, 3))


def test_abs_straddling_zero():
    assert abs(RationalInterval(-2, 1)) == RationalInterval(0, 2)
    assert abs(RationalInterval(-3, -1)) == RationalInterval(1, 3)


def test_point_unit_multiplication_is_identity():
    x = RationalInterval(Fraction(-2, 7), Fraction(5, 3))
    assert RationalInterval(1, 1) * x == x


def test_division_by_interval_containing_zero():
    with pytest.raises(PrecisionError):
        RationalInterval(1) / RationalInterval(-1, 1)
    with pytest.raises(PrecisionError):
        RationalInterval(1) / RationalInterval(0, 1)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RationalInterval(2, 1)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        RationalInterval(0.1, 1)


def test_immutable():
    x = RationalInterval(0, 1)
    with pytest.raises(AttributeError):
        x._lo = Fraction(5)


@given(intervals(), intervals(), rationals, rationals)
def test_containment_soundness(x, y, a_raw, b_raw):
    # pick points inside each interval by clamping
    a = min(max(a_raw, x.lo), x.hi)
    b = min(max(b_raw, y.lo), y.hi)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    assert abs(x).contains(abs(a))
    assert (-x).contains(-a)
    if y.lo > 0:
        assert (x / y).contains(a / b)


@given(intervals(), rationals)
def test_point_scalar_product_is_exact(x, c):
    out = x * c
    assert out.lo == min(x.lo * c, x.hi * c)
    assert out.hi == max(x.lo * c, x.hi * c)


def test_hull():
    h = hull([Fraction(1, 2), RationalInterval(Fraction(-1), Fraction(0)), 3])
    assert h == RationalInterval(-1, 3)
    with pytest.raises(ValueError):
        hull([])


@pytest.mark.parametrize(
    "text, value",
    [("-31", Fraction(-31)), ("283/100", Fraction(283, 100)), ("+4/6", Fraction(2, 3)), ("0", Fraction(0))],
)
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "", "1/-2", "a", "1//2"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_format_decimal_truncates_toward_zero():
    assert format_decimal(Fraction(2, 3)) == "0.6666666666"
    assert format_decimal(Fraction(-2, 3)) == "-0.6666666666"
    assert format_decimal(Fraction(-1, 10**12)) == "0.0000000000"
    assert format_decimal(Fraction(3100, 20080)) == "0.1543824701"


def test_format_scalar():
    assert format_scalar(Fraction(3, 1)) == "3"
    assert format_scalar(Fraction(155, 1004), decimal=True) == "155/1004 (~0.1543824701)"
    assert format_scalar(RationalInterval(Fraction(1, 3), Fraction(1, 2))) == "[1/3,1/2]"
    assert format_scalar(RationalInterval(0, 1), decimal=True) == "[0,1] (~0.0000000000..1.0000000000)"
