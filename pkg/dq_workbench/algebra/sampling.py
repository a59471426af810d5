"""Seeded random exact objects for property tests and randomized checks."""
import logging
from fractions import Fraction
from math import comb, factorial

import numpy as np

from dq_workbench.algebra.constants import DEFAULT_SEED, Chart
from dq_workbench.algebra.functional import TableFunctional
from dq_workbench.algebra.linalg import zeros
from dq_workbench.algebra.poly import Poly, leading_exponent, monomial_basis
from dq_workbench.algebra.scalar import ONE, ZERO, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.utils import gaussian_moment

logger = logging.getLogger(__name__)


def make_rng(seed: int = DEFAULT_SEED) -> np.random.Generator:
    return np.random.default_rng(seed)


def spawn(seed: int, k: int) -> list[np.random.Generator]:
    """k independent generators split from one recorded seed"""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def random_fraction(rng: np.random.Generator, bound: int = 3, denominator: int = 4) -> Fraction:
    num = int(rng.integers(-bound * denominator, bound * denominator + 1))
    return Fraction(num, int(rng.integers(1, denominator + 1)))


def random_scalar(rng: np.random.Generator, real: bool = False, **kwargs) -> Scalar:
    re = random_fraction(rng, **kwargs)
    return Scalar(re) if real else Scalar(re, random_fraction(rng, **kwargs))


def random_poly(
    rng: np.random.Generator,
    chart: Chart,
    n: int,
    degree: int,
    density: float = 0.5,
    real: bool = False,
) -> Poly:
    terms = {}
    for m in monomial_basis(chart, n, degree):
        if rng.random() < density:
            terms[leading_exponent(m)] = random_scalar(rng, real)
    return Poly(chart, n, terms)


def random_series(rng: np.random.Generator, order: int, real: bool = False, valuation: int = 0) -> TruncatedSeries:
    coeffs = [ZERO if r < valuation else random_scalar(rng, real) for r in range(order + 1)]
    return TruncatedSeries(order, tuple(coeffs))


def random_vector(rng: np.random.Generator, m: int, order: int) -> list[TruncatedSeries]:
    return [random_series(rng, order) for _ in range(m)]


def random_hermitian_tail(rng: np.random.Generator, m: int, order: int) -> np.ndarray:
    """Hermitian series matrix with zero l^0 part"""
    out = zeros(m, m, order)
    for i in range(m):
        out[i, i] = random_series(rng, order, real=True, valuation=1)
        for j in range(i + 1, m):
            x = random_series(rng, order, valuation=1)
            out[i, j], out[j, i] = x, x.conj()
    return out


def random_definite_matrix(rng: np.random.Generator, m: int, order: int) -> np.ndarray:
    """A* A + 1 for a random Gaussian rational A, as constant series"""
    a = [[random_scalar(rng) for _ in range(m)] for _ in range(m)]
    out = zeros(m, m, order)
    for i in range(m):
        for j in range(m):
            acc = ONE if i == j else ZERO
            for k in range(m):
                acc = acc + a[k][i].conj() * a[k][j]
            out[i, j] = TruncatedSeries.constant(acc, order)
    return out


# ===============================================================================
#     Faithful table functionals
# ===============================================================================


def _shifted_real_moment(a: int, s: Fraction) -> Fraction:
    """E[(X + s)^a] for X standard normal"""
    return sum(comb(a, j) * s ** (a - j) * gaussian_moment(j) for j in range(a + 1))


def _shifted_complex_moment(a: int, b: int, s: Scalar) -> Scalar:
    """E[(Z + s)^a (conj(Z) + conj(s))^b] for E[Z^j conj(Z)^k] = delta_jk j!"""
    acc = ZERO
    for j in range(min(a, b) + 1):
        term = ONE
        for _ in range(a - j):
            term = term * s
        for _ in range(b - j):
            term = term * s.conj()
        acc = acc + term * (comb(a, j) * comb(b, j) * factorial(j))
    return acc


def mixture_moment(chart: Chart, n: int, exps: tuple, weights: list, shifts: list) -> Scalar:
    """Moment of a positive mixture of shifted standard Gaussians"""
    acc = ZERO
    for w, shift in zip(weights, shifts):
        value = ONE
        for k in range(n):
            if chart == Chart.phase_space:
                value = value * _shifted_real_moment(exps[k], shift[k].re)
                value = value * _shifted_real_moment(exps[n + k], shift[k].im)
            else:
                value = value * _shifted_complex_moment(exps[k], exps[n + k], shift[k])
        acc = acc + value * w
    return acc


def random_faithful_table(
    rng: np.random.Generator,
    chart: Chart,
    n: int,
    order: int,
    degree: int,
    components: int = 2,
) -> TableFunctional:
    """Table functional on the monomials of degree <= `degree` whose l^0 part
    is a positive mixture of shifted Gaussian moments (faithful on
    polynomials) and whose higher orders are a random real functional"""
    weights = [Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 4))) for _ in range(components)]
    total = sum(weights)
    weights = [w / total for w in weights]
    shifts = [[random_scalar(rng, bound=1, denominator=2) for _ in range(n)] for _ in range(components)]
    entries = {}
    for m in monomial_basis(chart, n, degree):
        e = leading_exponent(m)
        if e in entries:
            continue
        e_star = leading_exponent(m.star())
        base = mixture_moment(chart, n, e, weights, shifts)
        real = e_star == e
        tail = [random_scalar(rng, real=real) for _ in range(order)]
        value = TruncatedSeries(order, (base, *tail))
        entries[e] = value
        entries[e_star] = value.conj()
    logger.debug(f"SAMPLING: faithful table with {len(entries)} entries, weights {weights}")
    return TableFunctional(chart, n, order, entries, "random-faithful-table")
