import pytest

from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.functional import (
    ClassicalPart,
    DeltaOrigin,
    FunctionalError,
    GaussianMoment,
    GramError,
    SmoothedFunctional,
    TableFunctional,
    eval_functional,
    gram_matrix,
)
from dq_workbench.algebra.literals import format_matrix
from dq_workbench.algebra.scalar import Scalar
from dq_workbench.algebra.star import BidiffGenerator, laplace_family, n_operator

from .conftest import qpoly, qseries, series, zpoly, zseries


def test_delta_origin(delta_complex):
    assert delta_complex(zpoly("z*zb + 3")) == series("3", 2)
    assert delta_complex(zseries("z + 2*l + l^2*zb", 2)) == series("2*l", 2)
    assert eval_functional(delta_complex, zpoly("zb*z - 1")) == series("-1", 2)
    assert str(delta_complex) == "delta-origin"


def test_delta_chart_mismatch(delta_complex):
    with pytest.raises(FunctionalError):
        delta_complex(qpoly("q"))
    with pytest.raises(FunctionalError):
        delta_complex(zseries("z", 1))


def test_smoothed_delta(delta_phase):
    lap = SmoothedFunctional.smooth(delta_phase, laplace_family(Chart.phase_space, 1, Scalar(1) / 4))
    assert lap(qpoly("q^2")) == series("1/2*l", 1)
    assert lap(qpoly("q*p")) == series("0", 1)
    assert lap.label() == "delta-origin o laplace(1/4)"
    smoothed_n = SmoothedFunctional.smooth(delta_phase, n_operator(1))
    assert smoothed_n(qpoly("q*p")) == series("-1i/2*l", 1)
    assert smoothed_n.with_order(2)(qseries("q^2*p^2", 2)) == series("-1/2*l^2", 2)


def test_smoothed_chart_mismatch(delta_complex):
    with pytest.raises(FunctionalError):
        SmoothedFunctional.smooth(delta_complex, n_operator(1))


def test_gaussian_moments():
    omega = GaussianMoment(Chart.phase_space, 1, 0)
    assert omega(qpoly("q^4")) == series("3", 0)
    assert omega(qpoly("1 + q^2 + q^2*p + q^3")) == series("2", 0)
    with pytest.raises(FunctionalError):
        GaussianMoment(Chart.complex, 1, 0)


def test_table_functional():
    omega = TableFunctional.from_literals(Chart.complex, 1, 1, {"1": "1", "z*zb": "2*l"})
    assert omega(zpoly("3 + z*zb")) == series("3 + 2*l", 1)
    with pytest.raises(FunctionalError, match="missing"):
        omega(zpoly("z"))


@pytest.mark.parametrize("key", ["2*z", "z + zb", "x"])
def test_table_invalid_keys(key):
    with pytest.raises(FunctionalError):
        TableFunctional.from_literals(Chart.complex, 1, 1, {key: "1"})


def test_table_reality():
    ok = TableFunctional.from_literals(Chart.complex, 1, 0, {"z": "1i", "zb": "-1i"})
    bad = TableFunctional.from_literals(Chart.complex, 1, 0, {"z": "1", "zb": "1i"})
    assert ok.check_reality() and not bad.check_reality()


def test_classical_part():
    omega = TableFunctional.from_literals(Chart.complex, 1, 2, {"1": "1 + l", "z*zb": "1/2 + l^2"})
    classical = ClassicalPart.of(omega)
    assert classical(zpoly("1 + 2*z*zb")) == series("2", 0)
    with pytest.raises(FunctionalError):
        classical.with_order(1)


def test_wick_gram(wick, delta_complex):
    g = gram_matrix(delta_complex, wick, 1)
    assert g.labels == ["1", "z", "zb"]
    assert format_matrix(g.entries) == [["1", "0", "0"], ["0", "0", "0"], ["0", "0", "2*l"]]
    assert g.claim() == "up to degree 1 and order 2"


def test_weyl_gram(weyl, delta_phase):
    g = gram_matrix(delta_phase, weyl, 1)
    assert format_matrix(g.entries) == [
        ["1", "0", "0"],
        ["0", "0", "(1/2i)*l"],
        ["0", "(-1/2i)*l", "0"],
    ]
    assert g.sub([1, 2]).labels == ["q", "p"]


def test_gram_order_override(wick, delta_complex):
    assert gram_matrix(delta_complex, wick, 1, order=0)[2, 2] == series("0", 0)


def test_gram_errors(wick, delta_phase):
    with pytest.raises(GramError):
        gram_matrix(delta_phase, wick, 1)
    bad = TableFunctional.from_literals(
        Chart.complex, 1, 0, {"1": "1", "z": "1", "zb": "1i", "z^2": "0", "z*zb": "0", "zb^2": "0"}
    )
    with pytest.raises(GramError, match="not Hermitian"):
        gram_matrix(bad, BidiffGenerator.pointwise(), 1)
