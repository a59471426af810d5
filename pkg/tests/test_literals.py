import pytest

from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.literals import (
    LiteralError,
    format_vector,
    parse_poly,
    parse_scalar,
    parse_series,
    parse_series_poly,
)
from dq_workbench.algebra.scalar import Scalar
from dq_workbench.algebra.series import TruncatedSeries


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3/2", Scalar(1) * 3 / 2),
        ("-1i", Scalar(0, -1)),
        ("(2+1i)", Scalar(2, 1)),
        ("1/(2i)", Scalar(0, -1) / 2),
    ],
)
def test_parse_scalar(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["1 - 3/2*l + (2+1i)*l^2", "0", "-l", "(1/2i)*l", "8*l^2"])
def test_series_literals_print_back(text):
    assert str(parse_series(text, 2)) == text


@pytest.mark.parametrize(
    "text, chart",
    [
        ("2*z*zb^2 - 1/3", Chart.complex),
        ("q^2 + p^2", Chart.phase_space),
        ("q + (1i)*p", Chart.phase_space),
        ("zb^2", Chart.complex),
    ],
)
def test_poly_literals_are_stable(text, chart):
    f = parse_poly(text, chart, 1)
    assert parse_poly(str(f), chart, 1) == f


def test_poly_printing_order():
    f = parse_poly("zb^2 + z*zb + z^2 + zb + z + 1", Chart.complex, 1)
    assert str(f) == "1 + z + zb + z^2 + z*zb + zb^2"
    assert str(parse_poly("z1*zb2", Chart.complex, 2)) == "z1*zb2"


def test_series_poly_literal():
    f = parse_series_poly("q*p - l/(2i)", Chart.phase_space, 1, 1)
    assert str(f) == "q*p + (1/2i)*l"
    assert f.coeffs[1].eval_origin() == Scalar(0, 1) / 2


@pytest.mark.parametrize(
    "text",
    ["", "1.5", "sqrt(2)", "x + 1", "1/q", "l +", "z**(1/2)"],
)
def test_invalid_literals(text):
    with pytest.raises(LiteralError):
        parse_series_poly(text, Chart.complex, 1, 2)


def test_order_overflow_is_rejected():
    with pytest.raises(LiteralError):
        parse_series("l^3", 2)


def test_format_vector():
    v = [TruncatedSeries.constant(Scalar(0, 1), 1), parse_series("-l", 1)]
    assert format_vector(v) == ["1i", "-l"]
