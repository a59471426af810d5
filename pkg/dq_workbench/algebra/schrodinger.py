"""Schroedinger representation of the Weyl-Moyal product on polynomial wave
functions: rho(f) psi = iota* N (f * pi* psi)."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from dq_workbench.algebra.constants import Chart, VarKind
from dq_workbench.algebra.functional import GaussianMoment, eval_functional
from dq_workbench.algebra.gns import RepPresentation, lambda_extension
from dq_workbench.algebra.poly import (
    Poly,
    PolyError,
    VarSort,
    lift,
    monomial_basis,
    series_restrict_zero_section,
)
from dq_workbench.algebra.scalar import ONE, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.star import BidiffGenerator, PolyLike, n_operator, star_multiply
from dq_workbench.algebra.utils import (
    compositions,
    falling_factorial,
    monomial_key,
    multi_add,
    multi_binomial,
    multi_factorial,
    multi_leq,
    multi_sub,
    sub_indices,
)

logger = logging.getLogger(__name__)


class SchrodingerError(Exception):
    """"""


def _series(f: PolyLike, order: int) -> TruncatedSeries:
    try:
        s = lift(f, order)
    except PolyError as e:
        raise SchrodingerError(str(e)) from e
    if s.coeffs[0].chart != Chart.phase_space:
        raise SchrodingerError(f"{s} does not live on the phase-space chart")
    return s


def wave_function(psi: PolyLike, order: int) -> TruncatedSeries:
    """Check and lift a p-free phase-space polynomial (series)

    Raises:
        SchrodingerError: wrong chart or momentum dependence
    """
    s = _series(psi, order)
    try:
        return TruncatedSeries(order, tuple(c.pullback_phase_space() for c in s.coeffs))
    except PolyError:
        raise SchrodingerError(f"wave function {s} depends on the momenta") from None


def q_monomial(n: int, alpha: tuple) -> Poly:
    return Poly.monomial(Chart.phase_space, n, tuple(alpha) + (0,) * n)


def p_degree(f: TruncatedSeries) -> int:
    return max(c.sort_degree(VarKind.p) for c in f.coeffs)


def default_order(f: PolyLike, order: int = None) -> int:
    """Explicit order, the order of a series, or the degree of a polynomial
    (enough for every term of N and of the product to survive)"""
    if order is not None:
        return order
    if isinstance(f, TruncatedSeries):
        return f.order
    return f.degree()


# ===============================================================================
#     The representation formula
# ===============================================================================


def schrodinger_apply(f: PolyLike, psi: PolyLike, order: int = None) -> TruncatedSeries:
    """rho(f) psi = iota* N (f *_WM pi* psi), exactly up to l^order"""
    if order is None:
        order = default_order(psi) if isinstance(psi, TruncatedSeries) else default_order(f)
    fs = _series(f, order)
    n = fs.coeffs[0].n
    psis = wave_function(psi, order)
    if psis.coeffs[0].n != n:
        raise SchrodingerError(f"observable with n={n} and wave function with n={psis.coeffs[0].n}")
    g = star_multiply(fs, psis, BidiffGenerator.weyl_moyal(n), order)
    return series_restrict_zero_section(n_operator(n).apply(g, order))


def weyl_gelfand_member(f: PolyLike, order: int = None) -> bool:
    """True iff iota* N f = 0"""
    order = default_order(f, order)
    fs = _series(f, order)
    n = fs.coeffs[0].n
    return series_restrict_zero_section(n_operator(n).apply(fs, order)).is_zero()


# ===============================================================================
#     Differential operators
# ===============================================================================


@dataclass
class DiffOperator:
    """sum_I a_I(q) d^I in canonical form (coefficients left of derivatives)

    Args:
        n (int): number of positions
        order (int): truncation order of the coefficients
        terms (dict): multi-index I over q_1..q_n -> series of p-free polys
    """

    n: int
    order: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for index, coeff in self.terms.items():
            coeff = wave_function(coeff, self.order)
            if coeff:
                clean[tuple(index)] = coeff
        self.terms = clean

    @classmethod
    def multiplication(cls, a: PolyLike, n: int, order: int) -> "DiffOperator":
        return cls(n, order, {(0,) * n: a})

    @classmethod
    def identity(cls, n: int, order: int) -> "DiffOperator":
        return cls.multiplication(Poly.constant(Chart.phase_space, n, ONE), n, order)

    @classmethod
    def derivative(cls, k: int, n: int, order: int, times: int = 1) -> "DiffOperator":
        """d^times / dq_k^times for k in 1..n"""
        index = tuple(times if j == k - 1 else 0 for j in range(n))
        return cls(n, order, {index: Poly.constant(Chart.phase_space, n, ONE)})

    # ---------------------------------------------------------------------------
    # Action and algebra
    # ---------------------------------------------------------------------------

    def _full(self, index: tuple) -> tuple:
        return tuple(index) + (0,) * self.n

    def _diff(self, a: TruncatedSeries, index: tuple) -> TruncatedSeries:
        full = self._full(index)
        return a.map(lambda c: c.diff_multi(full))

    def apply(self, psi: PolyLike) -> TruncatedSeries:
        psis = wave_function(psi, self.order)
        acc = TruncatedSeries.zeros(self.order, Poly.zero(Chart.phase_space, self.n))
        for index, a in self.terms.items():
            acc = acc + a * self._diff(psis, index)
        return acc

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        terms = dict(self.terms)
        for index, a in other.terms.items():
            terms[index] = terms[index] + a if index in terms else a
        return DiffOperator(self.n, self.order, terms)

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(self.n, self.order, {i: -a for i, a in self.terms.items()})

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def scale(self, c: Union[Scalar, int, Fraction]) -> "DiffOperator":
        return DiffOperator(self.n, self.order, {i: a * c for i, a in self.terms.items()})

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self o other, normalised with the Leibniz rule
        a d^I (b d^J) = sum_K C(I, K) a (d^K b) d^(I - K + J)"""
        terms = {}
        for i_index, a in self.terms.items():
            for j_index, b in other.terms.items():
                for k in sub_indices(i_index):
                    db = self._diff(b, k)
                    if not db:
                        continue
                    c = a * db * multi_binomial(i_index, k)
                    index = multi_add(multi_sub(i_index, k), j_index)
                    terms[index] = terms[index] + c if index in terms else c
        return DiffOperator(self.n, self.order, terms)

    __matmul__ = compose

    def adjoint(self) -> "DiffOperator":
        """(a d^I)^+ = (-1)^|I| d^I o conj(a), re-normalised"""
        out = DiffOperator(self.n, self.order)
        for index, a in self.terms.items():
            d = DiffOperator(self.n, self.order, {index: Poly.constant(Chart.phase_space, self.n, ONE)})
            term = d.compose(DiffOperator.multiplication(a.conj(), self.n, self.order))
            out = out + term.scale((-1) ** sum(index))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (self.n, self.order, self.terms) == (other.n, other.order, other.terms)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0]))

    def _derivative_label(self, index: tuple) -> str:
        parts = []
        for k, e in enumerate(index, start=1):
            if e == 1:
                parts.append(f"d/dq{k}")
            elif e > 1:
                parts.append(f"d^{e}/dq{k}^{e}")
        return "*".join(parts)

    @staticmethod
    def _coeff_label(a: TruncatedSeries) -> str:
        nonzero = [(r, e, c) for r, poly in enumerate(a.coeffs) for e, c in poly.terms.items()]
        if len(nonzero) == 1:
            r, e, c = nonzero[0]
            poly = a.coeffs[r]
            label = "*".join(
                x for x in ((f"l^{r}" if r > 1 else "l" if r == 1 else ""), poly.monomial_label(e)) if x
            )
            if not label:
                return str(c)
            return label if c == 1 else f"{c}*{label}"
        return str(a)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for index, a in self.sorted_terms():
            coeff = self._coeff_label(a)
            deriv = self._derivative_label(index)
            if not deriv:
                out.append(f"({coeff})")
            elif coeff == "1":
                out.append(deriv)
            else:
                out.append(f"({coeff})*{deriv}")
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"DiffOperator({self})"


def formal_adjoint(op: DiffOperator) -> DiffOperator:
    return op.adjoint()


def gaussian_adjoint(op: DiffOperator) -> DiffOperator:
    """Adjoint for the Gaussian weight: sum (-1)^|I| (d - q)^I o conj(a_I)"""
    n, order = op.n, op.order
    lowering = [
        DiffOperator.derivative(k, n, order)
        - DiffOperator.multiplication(
            Poly.variable(Chart.phase_space, n, VarSort(VarKind.q, k)), n, order
        )
        for k in range(1, n + 1)
    ]
    out = DiffOperator(n, order)
    for index, a in op.terms.items():
        term = DiffOperator.multiplication(a.conj(), n, order)
        for k, e in enumerate(index):
            for _ in range(e):
                term = lowering[k].compose(term)
        out = out + term.scale((-1) ** sum(index))
    return out


def gaussian_pairing(psi: PolyLike, phi: PolyLike, order: int) -> TruncatedSeries:
    """<psi, phi> = int conj(psi) phi dN(0, 1)^n, through Gaussian moments"""
    psis, phis = wave_function(psi, order), wave_function(phi, order)
    n = psis.coeffs[0].n
    return eval_functional(GaussianMoment(Chart.phase_space, n, order), psis.conj() * phis)


# ===============================================================================
#     Operator extraction
# ===============================================================================


def schrodinger_operator(f: PolyLike, order: int = None, check_degree: int = None) -> DiffOperator:
    """The differential operator equal to rho(f)

    The coefficient of d^alpha is solved from rho(f) q^alpha in increasing
    |alpha| up to the momentum degree of f, then the operator is validated on
    all q-monomials up to `check_degree` (p-degree + 2 by default).

    Raises:
        SchrodingerError: the extracted operator disagrees with rho(f)
    """
    order = default_order(f, order)
    fs = _series(f, order)
    n = fs.coeffs[0].n
    top = p_degree(fs)
    terms = {}
    alphas = [a for total in range(top + 1) for a in sorted(compositions(n, total), key=monomial_key)]
    for alpha in alphas:
        value = schrodinger_apply(fs, q_monomial(n, alpha), order)
        for index, a in terms.items():
            if index != alpha and multi_leq(index, alpha):
                factor = 1
                for x, y in zip(alpha, index):
                    factor *= falling_factorial(x, y)
                value = value - a * q_monomial(n, multi_sub(alpha, index)) * factor
        terms[alpha] = value / multi_factorial(alpha)
    op = DiffOperator(n, order, terms)

    check_degree = top + 2 if check_degree is None else check_degree
    for m in monomial_basis(Chart.phase_space, n, check_degree):
        if not m.is_p_free():
            continue
        if op.apply(m) != schrodinger_apply(fs, m, order):
            raise SchrodingerError(f"extracted operator {op} disagrees with rho({fs}) on {m}")
    logger.debug(f"SCHRODINGER: rho({fs}) = {op}")
    return op


def schrodinger_presentation(d: int, order: int, n: int = 1) -> RepPresentation:
    """l-linear extension of the Gaussian pairing on the q-monomials of
    degree <= d"""
    basis = [m for m in monomial_basis(Chart.phase_space, n, d) if m.is_p_free()]
    g0 = [
        [eval_functional(GaussianMoment(Chart.phase_space, n, 0), a.star() * b)[0] for b in basis]
        for a in basis
    ]
    pres = lambda_extension(g0, order, [str(b) for b in basis])
    pres.metadata.update({"model": "schrodinger", "chart": Chart.phase_space.value, "n": n, "degree": d})
    return pres
