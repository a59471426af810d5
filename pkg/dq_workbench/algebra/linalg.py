"""Exact helpers for numpy object matrices of TruncatedSeries."""
from typing import Sequence

import numpy as np

from dq_workbench.algebra.scalar import ONE, Scalar
from dq_workbench.algebra.series import TruncatedSeries


def zeros(rows: int, cols: int, order: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = TruncatedSeries.zeros(order)
    return out


def identity(m: int, order: int) -> np.ndarray:
    out = zeros(m, m, order)
    for i in range(m):
        out[i, i] = TruncatedSeries.constant(ONE, order)
    return out


def from_columns(columns: Sequence[Sequence[TruncatedSeries]], rows: int, order: int) -> np.ndarray:
    out = zeros(rows, len(columns), order)
    for j, col in enumerate(columns):
        for i, x in enumerate(col):
            out[i, j] = x
    return out


def from_scalars(rows: Sequence[Sequence], order: int) -> np.ndarray:
    """Series matrix with constant entries"""
    rows = [list(r) for r in rows]
    m = len(rows)
    k = len(rows[0]) if rows else 0
    out = zeros(m, k, order)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = TruncatedSeries.constant(Scalar.coerce(x), order)
    return out


def column(v: Sequence[TruncatedSeries]) -> np.ndarray:
    """1-d object array holding the series of v as entries"""
    out = np.empty(len(v), dtype=object)
    for i, x in enumerate(v):
        out[i] = x
    return out


_conj = np.frompyfunc(lambda x: x.conj(), 1, 1)


def mat_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if not a.shape[1] or not a.shape[0] or not b.shape[1]:
        return zeros(a.shape[0], b.shape[1], order)
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose"""
    if not a.size:
        return np.empty((a.shape[1], a.shape[0]), dtype=object)
    return _conj(a).T


def conj_vector(v: Sequence[TruncatedSeries]) -> np.ndarray:
    return _conj(column(v)) if len(v) else column(v)


def mat_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return a - b


def is_zero(a: np.ndarray) -> bool:
    return all(not x for x in a.flat)


def with_order(a: np.ndarray, order: int) -> np.ndarray:
    if not a.size:
        return np.empty(a.shape, dtype=object)
    return np.frompyfunc(lambda x: x.with_order(order), 1, 1)(a)


def block_diag(blocks: Sequence[np.ndarray], order: int) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols, order)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r, c = r + b.shape[0], c + b.shape[1]
    return out


def apply(a: np.ndarray, v: Sequence[TruncatedSeries], order: int) -> list:
    """a v for a rectangular matrix"""
    if a.shape[1] != len(v):
        raise ValueError(f"cannot apply a {a.shape} matrix to a vector of length {len(v)}")
    if not len(v):
        return [TruncatedSeries.zeros(order) for _ in range(a.shape[0])]
    return list(a.dot(column(v)))
