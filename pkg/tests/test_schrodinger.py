import pytest

from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.literals import format_matrix
from dq_workbench.algebra.sampling import random_poly, spawn
from dq_workbench.algebra.schrodinger import (
    DiffOperator,
    SchrodingerError,
    formal_adjoint,
    gaussian_adjoint,
    gaussian_pairing,
    schrodinger_apply,
    schrodinger_operator,
    schrodinger_presentation,
    weyl_gelfand_member,
)
from dq_workbench.algebra.star import BidiffGenerator, star_multiply

from .conftest import qpoly, qseries, zpoly

SYMBOLS = ["q", "p", "p^2", "q*p"]


@pytest.mark.parametrize(
    "f, text",
    [
        ("q", "(q)"),
        ("p", "(-1i*l)*d/dq1"),
        ("p^2", "(-1*l^2)*d^2/dq1^2"),
        ("q*p", "(-1/2i*l) + (-1i*l*q)*d/dq1"),
    ],
)
def test_operator_strings(f, text):
    assert str(schrodinger_operator(qpoly(f), 2)) == text


def test_apply():
    assert str(schrodinger_apply(qpoly("p"), qpoly("q^3"), 2)) == "(-3i)*l*q^2"
    assert str(schrodinger_apply(qpoly("q*p"), qpoly("q"), 2)) == "(-3/2i)*l*q"
    assert schrodinger_apply(qpoly("q^2"), qpoly("q"), 1) == qseries("q^3", 1)


def test_default_order():
    # the degree of a polynomial symbol is enough for every term
    assert schrodinger_apply(qpoly("p^2"), qpoly("q^2")) == qseries("-2*l^2", 2)


def test_gelfand_members():
    assert weyl_gelfand_member(qpoly("p"))
    assert not weyl_gelfand_member(qpoly("q*p"))
    assert weyl_gelfand_member(qseries("q*p - l/(2i)", 2))


@pytest.mark.parametrize("f", SYMBOLS)
@pytest.mark.parametrize("g", SYMBOLS)
def test_homomorphism(f, g):
    weyl = BidiffGenerator.weyl_moyal(1)
    fg = star_multiply(qpoly(f), qpoly(g), weyl, 2)
    assert schrodinger_operator(fg, 2) == schrodinger_operator(qpoly(f), 2) @ schrodinger_operator(qpoly(g), 2)


@pytest.mark.parametrize("f", SYMBOLS + ["1i*q*p^2"])
def test_formal_adjoint(f):
    f = qpoly(f)
    assert schrodinger_operator(f.star(), 2) == formal_adjoint(schrodinger_operator(f, 2))


def test_diff_operator_algebra():
    d = DiffOperator.derivative(1, 1, 0)
    q = DiffOperator.multiplication(qpoly("q"), 1, 0)
    # canonical commutation relation
    assert d @ q - q @ d == DiffOperator.identity(1, 0)
    assert (d @ q).apply(qpoly("q^2")) == qseries("3*q^2", 0)
    assert str(d @ q) == "(1) + (q)*d/dq1"
    with pytest.raises(SchrodingerError):
        DiffOperator.multiplication(qpoly("p"), 1, 0)


def test_gaussian_adjoint():
    d = DiffOperator.derivative(1, 1, 0)
    q = DiffOperator.multiplication(qpoly("q"), 1, 0)
    assert gaussian_adjoint(d) == q - d
    for psi in ["1", "q", "q^2 + 1i"]:
        for phi in ["q", "q^3 - q"]:
            lhs = gaussian_pairing(d.apply(qpoly(psi)), qpoly(phi), 0)
            rhs = gaussian_pairing(qpoly(psi), gaussian_adjoint(d).apply(qpoly(phi)), 0)
            assert lhs == rhs


def test_presentation():
    pres = schrodinger_presentation(2, 1)
    assert pres.labels == ["1", "q", "q^2"]
    assert format_matrix(pres.gram) == [["1", "0", "1"], ["0", "1", "0"], ["1", "0", "3"]]
    assert pres.metadata["model"] == "schrodinger"


def test_invalid_inputs():
    with pytest.raises(SchrodingerError, match="momenta"):
        schrodinger_apply(qpoly("q"), qpoly("p"), 1)
    with pytest.raises(SchrodingerError):
        schrodinger_operator(zpoly("z"), 1)
    with pytest.raises(SchrodingerError):
        schrodinger_apply(qpoly("q", 2), qpoly("q"), 1)


@pytest.mark.slow
def test_random_pairs():
    """200 seeded symbol pairs of degree <= 4 at order 6"""
    weyl = BidiffGenerator.weyl_moyal(1)
    for rng in spawn(5, 200):
        f, g = (random_poly(rng, Chart.phase_space, 1, 4) for _ in range(2))
        rho_f, rho_g = schrodinger_operator(f, 6), schrodinger_operator(g, 6)
        assert schrodinger_operator(star_multiply(f, g, weyl, 6), 6) == rho_f @ rho_g, (f, g)
        assert schrodinger_operator(f.star(), 6) == formal_adjoint(rho_f), f
