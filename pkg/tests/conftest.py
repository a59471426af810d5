import pytest
from hypothesis import settings

from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.functional import DeltaOrigin
from dq_workbench.algebra.literals import parse_poly, parse_series, parse_series_poly
from dq_workbench.algebra.star import BidiffGenerator

settings.register_profile("exact", max_examples=40, deadline=None)
settings.load_profile("exact")


def zpoly(text: str, n: int = 1):
    return parse_poly(text, Chart.complex, n)


def qpoly(text: str, n: int = 1):
    return parse_poly(text, Chart.phase_space, n)


def series(text: str, order: int):
    return parse_series(text, order)


def zseries(text: str, order: int, n: int = 1):
    return parse_series_poly(text, Chart.complex, n, order)


def qseries(text: str, order: int, n: int = 1):
    return parse_series_poly(text, Chart.phase_space, n, order)


@pytest.fixture
def wick():
    return BidiffGenerator.wick(1)


@pytest.fixture
def weyl():
    return BidiffGenerator.weyl_moyal(1)


@pytest.fixture
def delta_complex():
    return DeltaOrigin(Chart.complex, 1, 2)


@pytest.fixture
def delta_phase():
    return DeltaOrigin(Chart.phase_space, 1, 1)
