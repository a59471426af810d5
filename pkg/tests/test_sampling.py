from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from dq_workbench.algebra.constants import Chart
from dq_workbench.algebra.deform import classically_positive
from dq_workbench.algebra.sampling import (
    make_rng,
    mixture_moment,
    random_faithful_table,
    random_poly,
    spawn,
)
from dq_workbench.algebra.scalar import Scalar

from .conftest import zpoly


def test_spawn_is_deterministic():
    first = [g.integers(0, 1000, 5).tolist() for g in spawn(7, 3)]
    second = [g.integers(0, 1000, 5).tolist() for g in spawn(7, 3)]
    assert first == second
    assert first[0] != first[1]


def test_mixture_moments():
    one, origin = [Fraction(1)], [[Scalar(0)]]
    assert mixture_moment(Chart.phase_space, 1, (2, 0), one, origin) == 1
    assert mixture_moment(Chart.phase_space, 1, (4, 0), one, origin) == 3
    assert mixture_moment(Chart.phase_space, 1, (1, 1), one, [[Scalar(2, 3)]]) == 6
    assert mixture_moment(Chart.complex, 1, (1, 1), one, [[Scalar(1, 1)]]) == 3


def test_random_poly_degree():
    f = random_poly(make_rng(3), Chart.complex, 2, 2, density=1.0)
    assert f.degree() <= 2 and f.n == 2 and f.terms


@given(st.integers(min_value=0, max_value=2**32))
def test_faithful_tables(seed):
    omega = random_faithful_table(make_rng(seed), Chart.complex, 1, 1, 2)
    assert omega.check_reality()
    assert omega(zpoly("1"))[0] == 1
    # strictly positive classical part
    verdict = classically_positive(omega, 1)
    assert verdict.is_psd and not verdict.decomposition.null_indices
