import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

from dq_workbench.algebra.constants import CHART_KINDS, Chart, VarKind
from dq_workbench.algebra.scalar import ONE, ZERO, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.utils import (
    compositions,
    falling_factorial,
    monomial_key,
    multi_leq,
    multi_sub,
)

logger = logging.getLogger(__name__)


class PolyError(Exception):
    """"""


################################################################################
##  Variables ##################################################################
################################################################################


@dataclass(frozen=True)
class VarSort:
    """Typed coordinate: holomorphic z_k, antiholomorphic zb_k, position q_k
    or momentum p_k, with index k in 1..n"""

    kind: VarKind
    index: int = 1

    @property
    def chart(self) -> Chart:
        return next(c for c, kinds in CHART_KINDS.items() if self.kind in kinds)

    def position(self, n: int) -> int:
        """Slot of the variable in an exponent tuple of length 2n"""
        if not 1 <= self.index <= n:
            raise PolyError(f"variable index {self.index} out of range 1..{n}")
        first = CHART_KINDS[self.chart][0]
        return self.index - 1 if self.kind == first else n + self.index - 1

    def name(self, n: int = None) -> str:
        return self.kind.value if n == 1 else f"{self.kind.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "VarSort":
        """Read "zb2", "q", "p1", ..."""
        text = text.strip()
        for kind in sorted(VarKind, key=lambda k: -len(k.value)):
            if text.startswith(kind.value):
                rest = text[len(kind.value) :]
                if rest == "" or rest.isdigit():
                    return cls(kind, int(rest) if rest else 1)
        raise PolyError(f"unknown variable {text!r}")


def chart_variables(chart: Chart, n: int) -> list[VarSort]:
    """Variables of a chart in exponent-slot order"""
    first, second = CHART_KINDS[chart]
    return [VarSort(first, k) for k in range(1, n + 1)] + [
        VarSort(second, k) for k in range(1, n + 1)
    ]


def position_names(chart: Chart, n: int) -> tuple[str, ...]:
    return tuple(v.name(n) for v in chart_variables(chart, n))


def name_aliases(chart: Chart, n: int) -> dict[str, int]:
    """All accepted variable names mapped to their slot; for n = 1 both "z"
    and "z1" are accepted"""
    aliases = {}
    for pos, v in enumerate(chart_variables(chart, n)):
        aliases[v.name(n)] = pos
        aliases[v.name()] = pos
    return aliases


################################################################################
##  Polynomials ################################################################
################################################################################


@dataclass(frozen=True, eq=False)
class Poly:
    """Multivariate polynomial over Scalar in the variables of a chart

    Args:
        chart (Chart): complex (z, zb) or phase-space (q, p)
        n (int): number of coordinate pairs
        terms (Mapping[tuple, Scalar]): exponent tuple of length 2n (first
        kind of the chart first) -> coefficient; zeros are dropped
    """

    chart: Chart
    n: int
    terms: Mapping[tuple, Scalar]

    def __post_init__(self):
        size = 2 * self.n
        clean = {}
        for exps, c in dict(self.terms).items():
            exps = tuple(exps)
            if len(exps) != size or any(e < 0 for e in exps):
                raise PolyError(f"invalid exponent {exps} for n={self.n}")
            if not isinstance(c, Scalar):
                c = Scalar.coerce(c)
            if c:
                clean[exps] = c
        object.__setattr__(self, "terms", clean)

    # ---------------------------------------------------------------------------
    # Constructors
    # ---------------------------------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart, n: int) -> "Poly":
        return cls(chart, n, {})

    @classmethod
    def constant(cls, chart: Chart, n: int, value) -> "Poly":
        return cls(chart, n, {(0,) * (2 * n): value})

    @classmethod
    def monomial(cls, chart: Chart, n: int, exponents: tuple, coeff=ONE) -> "Poly":
        return cls(chart, n, {tuple(exponents): coeff})

    @classmethod
    def variable(cls, chart: Chart, n: int, var: VarSort) -> "Poly":
        if var.chart != chart:
            raise PolyError(f"variable {var.name()} does not belong to the {chart.value} chart")
        exps = [0] * (2 * n)
        exps[var.position(n)] = 1
        return cls.monomial(chart, n, tuple(exps))

    # ---------------------------------------------------------------------------
    # Inspection
    # ---------------------------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree, 0 for constants and for the zero polynomial"""
        return max((sum(e) for e in self.terms), default=0)

    def sort_degree(self, kind: VarKind) -> int:
        first = CHART_KINDS[self.chart][0]
        if kind not in CHART_KINDS[self.chart]:
            raise PolyError(f"{kind.value} is not a variable of the {self.chart.value} chart")
        span = range(0, self.n) if kind == first else range(self.n, 2 * self.n)
        return max((sum(e[k] for k in span) for e in self.terms), default=0)

    def max_exponents(self) -> tuple[int, ...]:
        size = 2 * self.n
        return tuple(max((e[k] for e in self.terms), default=0) for k in range(size))

    def sorted_terms(self) -> list[tuple[tuple, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0]))

    def coefficient(self, exponents: tuple) -> Scalar:
        return self.terms.get(tuple(exponents), ZERO)

    def is_p_free(self) -> bool:
        """True for phase-space polynomials without momentum dependence"""
        return self.chart == Chart.phase_space and all(
            not any(e[self.n :]) for e in self.terms
        )

    def monomial_label(self, exponents: tuple) -> str:
        names = position_names(self.chart, self.n)
        parts = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, exponents)
            if e
        ]
        return "*".join(parts)

    # ---------------------------------------------------------------------------
    # Arithmetic
    # ---------------------------------------------------------------------------

    def _same(self, other: "Poly") -> None:
        if other.chart != self.chart or other.n != self.n:
            raise PolyError(
                f"chart mismatch: {self.chart.value}/n={self.n} vs {other.chart.value}/n={other.n}"
            )

    def _lift(self, other) -> Union["Poly", None]:
        if isinstance(other, Poly):
            self._same(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return Poly.constant(self.chart, self.n, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return Poly(self.chart, self.n, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.chart, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return Poly(self.chart, self.n, {e: c * other for e, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            inv = Scalar.coerce(other).inverse()
            return Poly(self.chart, self.n, {e: c * inv for e, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return (self.chart, self.n) == (other.chart, other.n) and self.terms == other.terms
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return self.terms == Poly.constant(self.chart, self.n, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.chart, self.n, frozenset(self.terms.items())))

    # ---------------------------------------------------------------------------
    # Calculus and involution
    # ---------------------------------------------------------------------------

    def diff(self, var: VarSort, k: int = 1) -> "Poly":
        return poly_diff(self, var, k)

    def diff_multi(self, index: tuple) -> "Poly":
        """Multi-index derivative d^I for I over all 2n slots"""
        terms = {}
        for e, c in self.terms.items():
            if not multi_leq(index, e):
                continue
            factor = 1
            for ek, ik in zip(e, index):
                factor *= falling_factorial(ek, ik)
            terms[multi_sub(e, index)] = c * factor
        return Poly(self.chart, self.n, terms)

    def eval_origin(self) -> Scalar:
        return self.coefficient((0,) * (2 * self.n))

    def star(self) -> "Poly":
        """*-involution: conjugate coefficients, swap z_k <-> zb_k"""
        if self.chart == Chart.complex:
            n = self.n
            return Poly(
                self.chart,
                n,
                {e[n:] + e[:n]: c.conj() for e, c in self.terms.items()},
            )
        return Poly(self.chart, self.n, {e: c.conj() for e, c in self.terms.items()})

    conj = star

    def restrict_zero_section(self) -> "Poly":
        """iota*: restriction of a phase-space polynomial to p = 0"""
        if self.chart != Chart.phase_space:
            raise PolyError("the zero section only exists on the phase-space chart")
        n = self.n
        return Poly(self.chart, n, {e: c for e, c in self.terms.items() if not any(e[n:])})

    def pullback_phase_space(self) -> "Poly":
        """pi*: a p-free polynomial read as a function on phase space

        Raises:
            PolyError: the polynomial depends on the momenta
        """
        if not self.is_p_free():
            raise PolyError(f"{self} is not a function of the positions alone")
        return self

    def __str__(self) -> str:
        from dq_workbench.algebra.literals import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.chart.value}, n={self.n}, '{self}')"


################################################################################
##  Module level operations ####################################################
################################################################################


def poly_mul(f: Poly, g: Poly) -> Poly:
    """Pointwise (classical) product"""
    f._same(g)
    terms = {}
    for ef, cf in f.terms.items():
        for eg, cg in g.terms.items():
            e = tuple(a + b for a, b in zip(ef, eg))
            terms[e] = terms.get(e, ZERO) + cf * cg
    return Poly(f.chart, f.n, terms)


def poly_diff(f: Poly, var: VarSort, k: int = 1) -> Poly:
    """k-fold partial derivative of f in `var`"""
    if k < 0:
        raise PolyError(f"derivative count must be >= 0, got {k}")
    if var.chart != f.chart:
        raise PolyError(f"cannot differentiate a {f.chart.value} polynomial in {var.name()}")
    index = [0] * (2 * f.n)
    index[var.position(f.n)] = k
    return f.diff_multi(tuple(index))


def eval_origin(f: Poly) -> Scalar:
    return f.eval_origin()


def star_involution(x: Union[Poly, TruncatedSeries]) -> Union[Poly, TruncatedSeries]:
    """*-involution on polynomials, extended anti-linearly to series"""
    return x.star()


def iter_monomial_exponents(chart: Chart, n: int, d: int) -> Iterator[tuple]:
    for total in range(d + 1):
        yield from compositions(2 * n, total)


def monomial_basis(chart: Chart, n: int, d: int) -> list[Poly]:
    """All monomials of total degree <= d in the global monomial order"""
    if d < 0:
        raise PolyError(f"degree must be >= 0, got {d}")
    exps = sorted(iter_monomial_exponents(chart, n, d), key=monomial_key)
    return [Poly.monomial(chart, n, e) for e in exps]


def leading_exponent(f: Poly) -> tuple:
    """Exponent of a monomial (the single term of f)"""
    if len(f.terms) != 1:
        raise PolyError(f"{f} is not a monomial")
    return next(iter(f.terms))


################################################################################
##  Series of polynomials ######################################################
################################################################################


def lift(f: Union[Poly, TruncatedSeries], order: int) -> TruncatedSeries:
    """View a polynomial as a series of the given order"""
    if isinstance(f, TruncatedSeries):
        if f.order != order:
            raise PolyError(f"series of order {f.order} where order {order} is required")
        return f
    if not isinstance(f, Poly):
        raise PolyError(f"expected a polynomial or a series of polynomials, got {f!r}")
    return TruncatedSeries(order, (f,) + (Poly.zero(f.chart, f.n),) * order)


def series_degree(f: TruncatedSeries) -> int:
    return max(c.degree() for c in f.coeffs)


def series_restrict_zero_section(f: TruncatedSeries) -> TruncatedSeries:
    return f.map(lambda c: c.restrict_zero_section())


def poisson_bracket(f: Poly, g: Poly) -> Poly:
    """Canonical bracket sum_k df/dq_k dg/dp_k - df/dp_k dg/dq_k"""
    if f.chart != Chart.phase_space:
        raise PolyError("the canonical Poisson bracket lives on the phase-space chart")
    out = Poly.zero(f.chart, f.n)
    for k in range(1, f.n + 1):
        q, p = VarSort(VarKind.q, k), VarSort(VarKind.p, k)
        out = out + f.diff(q) * g.diff(p) - f.diff(p) * g.diff(q)
    return out
