import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dq_workbench.algebra import linalg
from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.gns import (
    GnsBuilder,
    GnsError,
    RepPresentation,
    classical_limit,
    gelfand_ideal_basis,
    gns_build,
    ideal_reduction_report,
    lambda_extension,
    no_go_certificate,
    orthogonal_sum,
    same_presentation,
    sum_commutes_with_classical_limit,
    verify_main_theorem,
)
from dq_workbench.algebra.literals import format_matrix, format_vector
from dq_workbench.algebra.sampling import make_rng, random_faithful_table, spawn
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.star import BidiffGenerator

from .conftest import zpoly


@pytest.fixture
def wick_presentation(wick, delta_complex):
    return gns_build(delta_complex, wick, 2, observables=[zpoly("z"), zpoly("zb")])


def test_wick_delta_presentation(wick_presentation):
    p = wick_presentation
    assert p.labels == ["1", "zb", "zb^2"]
    assert format_matrix(p.gram) == [["1", "0", "0"], ["0", "2*l", "0"], ["0", "0", "8*l^2"]]
    assert format_vector(p.cyclic) == ["1", "0", "0"]
    assert p.metadata["generator"] == "wick"
    op = p.operators["z"]
    assert (op.source, op.target) == (2, 3)
    assert op.labels == ["1", "zb", "zb^2", "zb^3"]
    assert format_matrix(op.matrix) == [
        ["0", "2*l", "0"],
        ["0", "0", "4*l"],
        ["0", "0", "0"],
        ["0", "0", "0"],
    ]
    assert format_matrix(p.operators["zb"].matrix) == [
        ["0", "0", "0"],
        ["1", "0", "0"],
        ["0", "1", "0"],
        ["0", "0", "1"],
    ]


def test_residuals_vanish(wick, delta_complex):
    builder = GnsBuilder(delta_complex, wick)
    assert linalg.is_zero(builder.composition_residual(zpoly("z"), zpoly("zb"), 1))
    assert linalg.is_zero(builder.star_residual(zpoly("z"), 1))
    assert builder.state_identity_defects(2) == []


def test_builder_errors(wick, weyl, delta_complex, delta_phase):
    with pytest.raises(GnsError, match="indefinite"):
        GnsBuilder(delta_phase, weyl).level(1)
    with pytest.raises(GnsError):
        GnsBuilder(delta_phase, wick)
    builder = GnsBuilder(delta_complex, wick)
    with pytest.raises(GnsError, match="degree bound"):
        builder.operator(zpoly("z^3"), 0)
    with pytest.raises(GnsError, match="filtration level"):
        builder.class_of(zpoly("z^3"), 2)


def test_gelfand_ideal(wick, delta_complex):
    ideal = gelfand_ideal_basis(delta_complex, wick, 2)
    assert [str(j) for j in ideal] == ["z", "z^2", "z*zb"]


def test_ideal_reduction(wick, delta_complex):
    report = ideal_reduction_report(delta_complex, wick, 2)
    assert (report.quantum_dim, report.reduced_dim, report.classical_dim) == (3, 3, 5)
    assert report.contained and report.proper


def test_classical_limit(wick_presentation):
    limit = classical_limit(wick_presentation)
    assert limit.passed
    assert limit.presentation.labels == ["1"]
    assert limit.h0_labels == ["zb", "zb^2"]
    assert limit.presentation.metadata["classical-limit"]
    assert format_matrix(limit.presentation.operators["zb"].matrix) == [["0"]]


def test_theorem_for_wick_delta(wick, delta_complex):
    report = verify_main_theorem(delta_complex, wick, 2)
    assert report.passed
    assert report.dims[2] == {"classical-limit": 1, "classical": 1}


@settings(max_examples=5)
@given(st.integers(min_value=0, max_value=2**32))
def test_theorem_for_faithful_tables(seed):
    rng = make_rng(seed)
    omega = random_faithful_table(rng, Chart.complex, 1, 2, 4)
    report = verify_main_theorem(omega, BidiffGenerator.wick(1), 1)
    assert report.passed
    assert report.dims[1] == {"classical-limit": 3, "classical": 3}


@pytest.mark.slow
@pytest.mark.parametrize(
    "gen",
    [BidiffGenerator.wick(1), BidiffGenerator.weyl_moyal(1)],
    ids=["wick", "weyl-moyal"],
)
def test_theorem_for_many_faithful_tables(gen):
    for rng in spawn(7, 100):
        omega = random_faithful_table(rng, gen.chart, 1, 2, 4)
        report = verify_main_theorem(omega, gen, 1)
        assert report.passed, omega
        assert report.dims[1] == {"classical-limit": 3, "classical": 3}


def test_rank_one_no_go():
    report = no_go_certificate()
    assert report.target == "2*l"
    assert report.contradiction_order == 1 and not report.consistent
    assert report.model == "rank-1"
    assert no_go_certificate(TruncatedSeries.zeros(2)).consistent


def test_gns_no_go_is_consistent(wick, delta_complex, weyl, delta_phase):
    report = no_go_certificate(builder=GnsBuilder(delta_complex, wick))
    assert report.model == "gns" and report.consistent
    with pytest.raises(GnsError):
        no_go_certificate(builder=GnsBuilder(delta_phase.with_order(0), weyl))


def test_orthogonal_sums(wick_presentation):
    p = wick_presentation
    s = orthogonal_sum([p, p])
    assert s.dim == 6 and s.labels[:3] == ["0:1", "0:zb", "0:zb^2"]
    assert s.operators["z"].matrix.shape == (8, 6)
    assert s.metadata["summands"] == 2
    assert sum_commutes_with_classical_limit([p, p])
    ext = lambda_extension([[1, 0], [0, 2]], 2)
    assert sum_commutes_with_classical_limit([p, ext, RepPresentation.zero(2)])
    assert same_presentation(orthogonal_sum([p]), orthogonal_sum([p]))
    assert not same_presentation(s, p)
    with pytest.raises(GnsError):
        orthogonal_sum([])
    with pytest.raises(GnsError, match="orders"):
        orthogonal_sum([p, lambda_extension([[1]], 1)])


def test_lambda_extension_limit():
    limit = classical_limit(lambda_extension([[1, 0], [0, 2]], 2, ["a", "b"]))
    assert limit.passed and limit.h0_labels == []
    assert limit.presentation.labels == ["a", "b"]
    assert format_matrix(limit.presentation.gram) == [["1", "0"], ["0", "2"]]
