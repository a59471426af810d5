import numpy as np
import pytest

from dq_workbench.algebra import linalg
from dq_workbench.algebra.scalar import I, Scalar
from dq_workbench.algebra.series import TruncatedSeries

from .conftest import series


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and linalg.is_zero(linalg.mat_sub(a, b))


@pytest.fixture
def a():
    return linalg.from_scalars([[1, I], [0, 2]], 1)


def test_mat_mul(a):
    b = linalg.from_scalars([[1, 0], [I, 1]], 1)
    expected = linalg.from_scalars([[0, I], [Scalar(0, 2), 2]], 1)
    assert _same(linalg.mat_mul(a, b, 1), expected)
    assert _same(linalg.mat_mul(a, linalg.identity(2, 1), 1), a)
    with pytest.raises(ValueError):
        linalg.mat_mul(a, linalg.zeros(3, 1, 1), 1)


def test_empty_inner_dimension():
    out = linalg.mat_mul(linalg.zeros(2, 0, 1), linalg.zeros(0, 3, 1), 1)
    assert out.shape == (2, 3)
    assert all(isinstance(x, TruncatedSeries) and x.order == 1 and not x for x in out.flat)
    image = linalg.apply(linalg.zeros(2, 0, 2), [], 2)
    assert len(image) == 2 and all(isinstance(x, TruncatedSeries) and not x for x in image)
    assert linalg.adjoint(linalg.zeros(0, 2, 1)).shape == (2, 0)


def test_adjoint(a):
    adj = linalg.adjoint(a)
    assert adj[1, 0] == a[0, 1].conj() and adj[0, 1] == a[1, 0]
    assert _same(linalg.adjoint(adj), a)
    v = [series("1 + 1i*l", 1), series("l", 1)]
    assert list(linalg.conj_vector(v)) == [series("1 - 1i*l", 1), series("l", 1)]


def test_apply(a):
    v = [series("l", 1), series("1", 1)]
    assert linalg.apply(a, v, 1) == [series("1i + l", 1), series("2", 1)]
    with pytest.raises(ValueError):
        linalg.apply(a, v[:1], 1)


def test_with_order():
    m = linalg.from_columns([[series("1 + l", 1)], [series("l", 1)]], 1, 1)
    lifted = linalg.with_order(m, 3)
    assert lifted[0, 1].order == 3 and lifted[0, 0] == series("1 + l", 3)
    assert _same(linalg.with_order(lifted, 1), m)
    assert linalg.with_order(linalg.zeros(0, 2, 1), 2).shape == (0, 2)
