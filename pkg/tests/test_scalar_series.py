from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dq_workbench.algebra.constants import Ordering
from dq_workbench.algebra.scalar import ONE, ZERO, I, Scalar, ScalarError
from dq_workbench.algebra.series import SeriesError, TruncatedSeries, series_arith, series_cmp, series_conj
from dq_workbench.algebra.utils import compositions, format_fraction, monomial_key, to_fraction

from .conftest import series

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.builds(Scalar, fractions, fractions)


def series_of(order: int):
    return st.lists(scalars, min_size=order + 1, max_size=order + 1).map(
        lambda c: TruncatedSeries(order, tuple(c))
    )


def test_scalar_arithmetic():
    a = Scalar(Fraction(1, 2), 1)
    assert a * a.conj() == a.abs2() == Scalar(Fraction(5, 4))
    assert a * a.inverse() == ONE
    assert I * I == -ONE
    assert str(Scalar(0, Fraction(-1, 2))) == "-1/2i"
    assert str(Scalar(2, -1)) == "2-1i"
    assert Scalar(3) == 3 and hash(Scalar(3)) == hash(3)


def test_scalar_rejects_inexact_values():
    with pytest.raises(ScalarError):
        Scalar(0.5)
    with pytest.raises(ScalarError):
        Scalar.coerce(True)
    with pytest.raises(TypeError):
        to_fraction("1.5")
    with pytest.raises(ScalarError):
        ZERO.inverse()
    with pytest.raises(ScalarError):
        I.sign()


def test_format_fraction_and_utils():
    assert format_fraction(Fraction(-3, 2)) == "-3/2"
    assert format_fraction(Fraction(4)) == "4"
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert sorted([(0, 2), (1, 0), (0, 0), (1, 1)], key=monomial_key) == [(0, 0), (1, 0), (1, 1), (0, 2)]


def test_series_basics():
    s = series("1 - 3/2*l + (2+1i)*l^2", 2)
    assert str(s) == "1 - 3/2*l + (2+1i)*l^2"
    assert s.valuation() == 0 and s.is_unit()
    assert series("2*l^2", 3).valuation() == 2
    assert TruncatedSeries.zeros(2).valuation() is None
    assert series("l", 2).shift_up(1) == series("l^2", 2)
    assert series("l^2", 2).shift_down(1) == series("l", 2)
    with pytest.raises(SeriesError):
        series("l", 2).shift_down(2)


def test_series_from_coeffs():
    assert TruncatedSeries.from_coeffs([1, 0, Fraction(1, 2)], 3) == series("1 + 1/2*l^2", 3)
    assert TruncatedSeries.from_coeffs([I], 2) == series("1i", 2)
    assert TruncatedSeries.from_coeffs([1, 2, 0, 0], 1) == series("1 + 2*l", 1)
    with pytest.raises(SeriesError):
        TruncatedSeries.from_coeffs([1, 0, 3], 1)


def test_series_inverse():
    s = series("1 - l", 3)
    assert s.inverse() == series("1 + l + l^2 + l^3", 3)
    assert s * s.inverse() == TruncatedSeries.constant(ONE, 3)
    with pytest.raises(SeriesError):
        series("l", 2).inverse()


def test_series_order_mismatch():
    with pytest.raises(SeriesError):
        series("1", 1) + series("1", 2)
    with pytest.raises(SeriesError):
        series_arith(series("1", 1), series("1", 1), "div")
    assert series("1 + l", 2).with_order(1) == series("1 + l", 1)


def test_lexicographic_order():
    assert series_cmp(series("l", 2), series("0", 2)) == Ordering.greater
    assert series_cmp(series("-l + 5*l^2", 2), series("0", 2)) == Ordering.less
    assert series_cmp(series("l^2", 2), series("l^2", 2)) == Ordering.equal
    # a positive l^2 coefficient is dominated by a negative l coefficient
    assert series("-l + 100*l^2", 2).sign() == -1
    with pytest.raises(SeriesError):
        series("1i*l", 2).sign()


@given(series_of(2), series_of(2), series_of(2))
def test_series_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj() == series_conj(a) * series_conj(b)


@given(series_of(3))
def test_unit_inverse(a):
    if a.is_unit():
        assert a * a.inverse() == TruncatedSeries.constant(ONE, 3)
    else:
        with pytest.raises(SeriesError):
            a.inverse()


@given(series_of(2))
def test_abs2_is_lex_nonnegative(a):
    assert a.abs2().is_real()
    assert a.abs2().sign() >= 0
