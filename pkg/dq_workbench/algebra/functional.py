import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Mapping, Union

import numpy as np

from dq_workbench.algebra.constants import Chart, FunctionalKind, GeneratorTag
from dq_workbench.algebra.literals import LiteralError, parse_poly, parse_series
from dq_workbench.algebra.poly import Poly, PolyError, leading_exponent, lift, monomial_basis
from dq_workbench.algebra.scalar import ZERO, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.star import (
    BidiffGenerator,
    PolyLike,
    SmoothingError,
    SmoothingOperator,
    star_multiply,
)
from dq_workbench.algebra.utils import gaussian_moment

logger = logging.getLogger(__name__)


class FunctionalError(Exception):
    """"""


class GramError(Exception):
    """"""


# ===============================================================================
#     Functionals
# ===============================================================================


@dataclass(frozen=True)
class Functional(ABC):
    """C[[l]]-linear functional on the polynomials of a chart, exact up to
    l^order

    Subclasses define the value on a single polynomial; series arguments are
    evaluated term by term.
    """

    chart: Chart
    n: int
    order: int

    kind: FunctionalKind = field(init=False, default=None)

    @abstractmethod
    def eval_poly(self, f: Poly) -> TruncatedSeries:
        """Value of the functional on one polynomial, as a series of order
        `self.order`"""

    @abstractmethod
    def label(self) -> str:
        """Short id used in reports"""

    def with_order(self, order: int) -> "Functional":
        return replace(self, order=order)

    def __call__(self, f: PolyLike) -> TruncatedSeries:
        return eval_functional(self, f)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class DeltaOrigin(Functional):
    """delta_0: f -> f(0), extended l-linearly"""

    kind: FunctionalKind = field(init=False, default=FunctionalKind.delta_origin)

    def eval_poly(self, f: Poly) -> TruncatedSeries:
        return TruncatedSeries.constant(f.eval_origin(), self.order)

    def label(self) -> str:
        return "delta-origin"


@dataclass(frozen=True)
class SmoothedFunctional(Functional):
    """omega o op for a smoothing operator op = exp(l D)

    With delta_0 as base this is the smoothed delta functional; with any base
    it is the template of the deformation search.
    """

    base: Functional = None
    op: SmoothingOperator = None

    kind: FunctionalKind = field(init=False, default=FunctionalKind.smoothed_delta)

    def __post_init__(self):
        if self.base is None or self.op is None:
            raise FunctionalError("a smoothed functional needs a base functional and an operator")
        if self.base.chart != self.op.chart or self.base.chart != self.chart:
            raise FunctionalError(
                f"{self.op} acts on the {self.op.chart.value} chart, "
                f"the base functional lives on the {self.base.chart.value} chart"
            )

    @classmethod
    def smooth(cls, base: Functional, op: SmoothingOperator) -> "SmoothedFunctional":
        return cls(base.chart, base.n, base.order, base, op)

    def eval_poly(self, f: Poly) -> TruncatedSeries:
        try:
            g = self.op.apply(f, self.order)
        except SmoothingError as e:
            raise FunctionalError(str(e)) from e
        return eval_functional(self.base, g)

    def with_order(self, order: int) -> "SmoothedFunctional":
        return replace(self, order=order, base=self.base.with_order(order))

    def label(self) -> str:
        return f"{self.base.label()} o {self.op}"


@dataclass(frozen=True)
class GaussianMoment(Functional):
    """Zero-section Gaussian moments: q^a p^b -> prod_k (a_k - 1)!! for even
    a_k and b = 0, zero otherwise; normalised so that omega(1) = 1"""

    kind: FunctionalKind = field(init=False, default=FunctionalKind.gaussian_moment)

    def __post_init__(self):
        if self.chart != Chart.phase_space:
            raise FunctionalError("the gaussian-moment functional lives on the phase-space chart")

    def eval_poly(self, f: Poly) -> TruncatedSeries:
        acc = ZERO
        for e, c in f.restrict_zero_section().terms.items():
            m = 1
            for a in e[: self.n]:
                m *= gaussian_moment(a)
            acc = acc + c * m
        return TruncatedSeries.constant(acc, self.order)

    def label(self) -> str:
        return "gaussian-moment"


@dataclass(frozen=True)
class TableFunctional(Functional):
    """Functional given by its values on monomials

    Args:
        entries (Mapping[tuple, TruncatedSeries]): exponent tuple -> value
    """

    entries: Mapping = None
    name: str = "table"

    kind: FunctionalKind = field(init=False, default=FunctionalKind.table)

    def __post_init__(self):
        entries = {}
        for e, value in dict(self.entries or {}).items():
            if not isinstance(value, TruncatedSeries):
                value = TruncatedSeries.constant(Scalar.coerce(value), self.order)
            if value.order != self.order:
                raise FunctionalError(
                    f"table value of order {value.order} in a functional of order {self.order}"
                )
            entries[tuple(e)] = value
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_literals(
        cls, chart: Chart, n: int, order: int, entries: Mapping[str, str], name: str = "table"
    ) -> "TableFunctional":
        """Build a table from monomial literals to series literals, e.g.
        {"1": "1", "z*zb": "2*l"}

        Raises:
            FunctionalError: a key is not a single monomial or a value does
            not parse
        """
        table = {}
        for key, value in entries.items():
            try:
                m = parse_poly(key, chart, n)
                e = leading_exponent(m)
                if m.terms[e] != 1:
                    raise PolyError(f"{key!r} has a coefficient")
                table[e] = parse_series(str(value), order)
            except (LiteralError, PolyError) as err:
                raise FunctionalError(f"invalid table entry {key!r} = {value!r}: {err}") from err
        return cls(chart, n, order, table, name)

    def eval_poly(self, f: Poly) -> TruncatedSeries:
        acc = TruncatedSeries.zeros(self.order)
        for e, c in f.terms.items():
            if e not in self.entries:
                raise FunctionalError(
                    f"monomial {f.monomial_label(e) or '1'} is missing from the table {self.name!r}"
                )
            acc = acc + self.entries[e] * c
        return acc

    def with_order(self, order: int) -> "TableFunctional":
        return replace(
            self, order=order, entries={e: v.with_order(order) for e, v in self.entries.items()}
        )

    def check_reality(self) -> bool:
        """omega(m*) == conj(omega(m)) for every tabulated monomial whose
        involution image is tabulated too"""
        for e, value in self.entries.items():
            m = Poly.monomial(self.chart, self.n, e).star()
            e_star = leading_exponent(m)
            if e_star in self.entries and self.entries[e_star] != value.conj():
                logger.debug(f"FUNCTIONAL: reality fails on {m}")
                return False
        return True

    def label(self) -> str:
        return self.name


@dataclass(frozen=True)
class ClassicalPart(Functional):
    """The l^0 part omega_0 of a functional, at truncation order 0"""

    source: Functional = None

    kind: FunctionalKind = field(init=False, default=None)

    @classmethod
    def of(cls, omega: Functional) -> "ClassicalPart":
        return cls(omega.chart, omega.n, 0, omega)

    def eval_poly(self, f: Poly) -> TruncatedSeries:
        return self.source.eval_poly(f).with_order(0)

    def with_order(self, order: int) -> "ClassicalPart":
        if order != 0:
            raise FunctionalError("the classical part only exists at order 0")
        return self

    def label(self) -> str:
        return f"classical({self.source.label()})"


def eval_functional(omega: Functional, f: PolyLike) -> TruncatedSeries:
    """Exact value omega(f) of a polynomial or series of polynomials

    Raises:
        FunctionalError: chart or order mismatch, missing table monomial
    """
    try:
        fs = lift(f, omega.order)
    except PolyError as e:
        raise FunctionalError(str(e)) from e
    c0 = fs.coeffs[0]
    if c0.chart != omega.chart or c0.n != omega.n:
        raise FunctionalError(
            f"{omega.label()} lives on the {omega.chart.value} chart (n={omega.n}), "
            f"got an argument on the {c0.chart.value} chart (n={c0.n})"
        )
    acc = TruncatedSeries.zeros(omega.order)
    for a, fa in enumerate(fs.coeffs):
        if fa:
            acc = acc + omega.eval_poly(fa).shift_up(a)
    return acc


# ===============================================================================
#     Gram forms
# ===============================================================================


@dataclass(eq=False)
class GramForm:
    """G_ij = omega(e_i* * e_j) on a monomial basis, entries are series

    basis: the monomials e_i in the global order

    entries: object matrix of TruncatedSeries
    """

    basis: list
    entries: np.ndarray
    functional: str = ""
    generator: GeneratorTag = GeneratorTag.custom
    degree: int = 0
    order: int = 0

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> list[str]:
        return [str(b) for b in self.basis]

    def __getitem__(self, ij) -> TruncatedSeries:
        return self.entries[ij]

    def sub(self, indices: list[int]) -> "GramForm":
        """Compression to a subset of basis elements"""
        idx = np.array(indices, dtype=int)
        entries = self.entries[np.ix_(idx, idx)] if len(indices) else np.empty((0, 0), dtype=object)
        return GramForm(
            [self.basis[k] for k in indices],
            entries,
            self.functional,
            self.generator,
            self.degree,
            self.order,
        )

    def claim(self) -> str:
        return f"up to degree {self.degree} and order {self.order}"


def hermitian_defect(entries: np.ndarray) -> Union[tuple, None]:
    """First (i, j) with G_ji != conj(G_ij), None for a Hermitian matrix"""
    m = entries.shape[0]
    for i in range(m):
        for j in range(i, m):
            if entries[j, i] != entries[i, j].conj():
                return i, j
    return None


def gram_matrix(
    omega: Functional, gen: BidiffGenerator, d: int, order: int = None, basis: list = None
) -> GramForm:
    """Exact Gram form of omega for the product of `gen` on the monomials of
    degree <= d

    Raises:
        GramError: chart mismatch or non-Hermitian result
        FunctionalError: propagated from the evaluation
    """
    if omega.chart != gen.chart or omega.n != gen.n:
        raise GramError(
            f"functional {omega.label()} ({omega.chart.value}, n={omega.n}) and product "
            f"{gen.tag.value} ({gen.chart.value}, n={gen.n}) do not share a chart"
        )
    if order is not None and order != omega.order:
        omega = omega.with_order(order)
    order = omega.order
    basis = monomial_basis(gen.chart, gen.n, d) if basis is None else basis
    m = len(basis)
    entries = np.empty((m, m), dtype=object)
    for i, ei in enumerate(basis):
        ei_star = ei.star()
        for j, ej in enumerate(basis):
            entries[i, j] = eval_functional(omega, star_multiply(ei_star, ej, gen, order))
    defect = hermitian_defect(entries)
    if defect is not None:
        i, j = defect
        raise GramError(
            f"gram form of {omega.label()} is not Hermitian at ({basis[i]}, {basis[j]}): "
            f"{entries[i, j]} vs {entries[j, i]}"
        )
    logger.debug(f"GRAM: {m}x{m} form of {omega.label()} for {gen.tag.value}, d={d}, N={order}")
    return GramForm(basis, entries, omega.label(), gen.tag, d, order)
