import pytest
from hypothesis import given
from hypothesis import strategies as st

from dq_workbench.algebra.constants import Chart, Expansion, VarKind
from dq_workbench.algebra.poly import VarSort
from dq_workbench.algebra.sampling import make_rng, random_poly, spawn
from dq_workbench.algebra.scalar import I, Scalar
from dq_workbench.algebra.star import (
    BidiffGenerator,
    GeneratorTerm,
    StarProductError,
    apply_smoothing,
    assoc_check,
    commutator,
    default_pair_samples,
    default_triple_samples,
    describe,
    hermitian_check,
    laplace_family,
    n_operator,
    star_multiply,
)

from .conftest import qpoly, qseries, zpoly, zseries


def test_wick_products(wick):
    assert star_multiply(zpoly("z"), zpoly("zb"), wick, 2) == zseries("z*zb + 2*l", 2)
    assert star_multiply(zpoly("zb"), zpoly("z"), wick, 2) == zseries("z*zb", 2)
    assert star_multiply(zpoly("z^2"), zpoly("zb^2"), wick, 2) == zseries("z^2*zb^2 + 8*l*z*zb + 8*l^2", 2)
    assert str(commutator(zpoly("z"), zpoly("zb"), wick, 1)) == "2*l"


def test_weyl_moyal_products(weyl):
    assert star_multiply(qpoly("q"), qpoly("p"), weyl, 1) == qseries("q*p + 1i/2*l", 1)
    assert star_multiply(qpoly("p"), qpoly("q"), weyl, 1) == qseries("q*p - 1i/2*l", 1)
    assert str(commutator(qpoly("q"), qpoly("p"), weyl, 2)) == "(1i)*l"
    # p^2 * q^2 reaches l^2
    assert star_multiply(qpoly("p^2"), qpoly("q^2"), weyl, 2) == qseries("q^2*p^2 - 2i*l*q*p - 1/2*l^2", 2)


def test_truncation(wick):
    assert star_multiply(zpoly("z^2"), zpoly("zb^2"), wick, 0) == zseries("z^2*zb^2", 0)


def test_pointwise():
    gen = BidiffGenerator.pointwise(Chart.phase_space)
    assert star_multiply(qpoly("q"), qpoly("p"), gen, 2) == qseries("q*p", 2)


def test_chart_mismatch(wick):
    with pytest.raises(StarProductError):
        star_multiply(qpoly("q"), qpoly("p"), wick, 1)
    with pytest.raises(StarProductError):
        star_multiply(zseries("z", 1), zpoly("z"), wick, 2)


@pytest.mark.parametrize("gen", [BidiffGenerator.wick(1), BidiffGenerator.weyl_moyal(1)], ids=["wick", "weyl"])
def test_builtin_laws(gen):
    assert assoc_check(gen, default_triple_samples(gen.chart, 1, 2), 2).passed
    res = hermitian_check(gen, default_pair_samples(gen.chart, 1, 2), 2)
    assert res.passed and res.tested == 49


def test_builtin_laws_two_pairs():
    gen = BidiffGenerator.wick(2)
    samples = default_triple_samples(Chart.complex, 2, 1)
    assert assoc_check(gen, samples, 2).passed


def test_custom_generator_from_terms():
    q, p = VarSort(VarKind.q), VarSort(VarKind.p)
    gen = BidiffGenerator.custom(Chart.phase_space, 1, [GeneratorTerm(q, p, I / 2), GeneratorTerm(p, q, -I / 2)])
    assert star_multiply(qpoly("q^2"), qpoly("p^2"), gen, 2) == star_multiply(
        qpoly("q^2"), qpoly("p^2"), BidiffGenerator.weyl_moyal(1), 2
    )


def test_linear_expansion_is_not_associative():
    q, p = VarSort(VarKind.q), VarSort(VarKind.p)
    terms = [GeneratorTerm(q, p, I / 2), GeneratorTerm(p, q, -I / 2)]
    with pytest.raises(StarProductError, match="not associative"):
        BidiffGenerator.custom(Chart.phase_space, 1, terms, Expansion.linear)
    gen = BidiffGenerator.custom(Chart.phase_space, 1, terms, Expansion.linear, validate=False)
    res = assoc_check(gen, default_triple_samples(Chart.phase_space, 1, 2), 2)
    assert not res.passed
    assert res.witness is not None and len(res.witness) == 3
    # the defect only appears at second order
    assert assoc_check(gen, default_triple_samples(Chart.phase_space, 1, 2), 1).passed


def test_generator_term_chart():
    with pytest.raises(StarProductError):
        GeneratorTerm(VarSort(VarKind.z), VarSort(VarKind.p), Scalar(1))


def test_describe():
    assert "Wick" in describe("wick")
    assert BidiffGenerator.from_tag("weyl-moyal").chart == Chart.phase_space
    with pytest.raises(StarProductError):
        BidiffGenerator.from_tag("custom")


def test_smoothing_operators():
    lap = laplace_family(Chart.phase_space, 1, Scalar(1, 0) / 4)
    assert lap.apply(qpoly("q^2"), 1) == qseries("q^2 + 1/2*l", 1)
    assert apply_smoothing(qpoly("q*p"), lap, 1) == qseries("q*p", 1)
    n_op = n_operator(1)
    assert n_op.apply(qpoly("q*p"), 1) == qseries("q*p - 1i/2*l", 1)
    assert n_operator(1, inverse=True).apply(n_op.apply(qpoly("q^2*p^2"), 2), 2) == qseries("q^2*p^2", 2)


@given(st.integers(min_value=0, max_value=2**32))
def test_random_wick_laws(seed):
    rng = make_rng(seed)
    f, g, h = (random_poly(rng, Chart.complex, 1, 2) for _ in range(3))
    gen = BidiffGenerator.wick(1)
    assert assoc_check(gen, [f, g, h], 2).passed
    assert hermitian_check(gen, [f, g], 2).passed


@given(st.integers(min_value=0, max_value=2**32))
def test_random_weyl_laws(seed):
    rng = make_rng(seed)
    f, g = (random_poly(rng, Chart.phase_space, 1, 2) for _ in range(2))
    gen = BidiffGenerator.weyl_moyal(1)
    fg = star_multiply(f, g, gen, 2)
    assert fg.star() == star_multiply(g.star(), f.star(), gen, 2)
    # first order term is the antisymmetric bracket
    assert (fg + star_multiply(g, f, gen, 2)).coeffs[1] == 0


@pytest.mark.slow
@pytest.mark.parametrize(
    "gen, chart",
    [(BidiffGenerator.wick(1), Chart.complex), (BidiffGenerator.weyl_moyal(1), Chart.phase_space)],
)
def test_laws_on_random_triples(gen, chart):
    """Associativity and the involution on 500 seeded triples of degree <= 3,
    orders 0 to 4"""
    rngs = spawn(3, 500)
    for k, rng in enumerate(rngs):
        order = k % 5
        f, g, h = (random_poly(rng, chart, 1, int(rng.integers(0, 4))) for _ in range(3))
        lhs = star_multiply(star_multiply(f, g, gen, order), h, gen, order)
        rhs = star_multiply(f, star_multiply(g, h, gen, order), gen, order)
        assert lhs == rhs, (f, g, h, order)
        fg = star_multiply(f, g, gen, order)
        assert fg.star() == star_multiply(g.star(), f.star(), gen, order), (f, g, order)
