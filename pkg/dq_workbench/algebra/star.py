"""Exponential bidifferential star products and smoothing operators.

A generator P = l * sum_t c_t d_{left_t} x d_{right_t} defines the product
f * g = mu o exp(P)(f x g); Wick and Weyl-Moyal are the built-in cases. On
polynomials the exponential terminates since every application of P lowers
the degrees of both factors.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence, Union

from dq_workbench.algebra.constants import (
    PRODUCT_INFOS,
    Chart,
    Expansion,
    GeneratorTag,
    VarKind,
)
from dq_workbench.algebra.poly import Poly, PolyError, VarSort, lift, monomial_basis, poly_mul
from dq_workbench.algebra.scalar import I, ONE, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.utils import multi_add, multi_leq, unit_index

logger = logging.getLogger(__name__)


class StarProductError(Exception):
    """"""


class SmoothingError(Exception):
    """"""


PolyLike = Union[Poly, TruncatedSeries]


@dataclass(frozen=True)
class PropertyResult:
    """Outcome of a sampled property test; a failure is a result, not an error

    passed: True if no sample violates the property

    witness: first violating sample tuple (None when passed)

    tested: number of samples checked
    """

    passed: bool
    witness: Union[tuple, None] = None
    tested: int = 0
    detail: str = ""


# ===============================================================================
#     Generators
# ===============================================================================


@dataclass(frozen=True)
class GeneratorTerm:
    """One summand c * l * (d_left x d_right) of a generator"""

    left: VarSort
    right: VarSort
    coeff: Scalar

    def __post_init__(self):
        object.__setattr__(self, "coeff", Scalar.coerce(self.coeff))
        if self.left.chart != self.right.chart:
            raise StarProductError(
                f"generator term mixes the charts of {self.left.name()} and {self.right.name()}"
            )


@dataclass(frozen=True)
class BidiffGenerator:
    """Constant coefficient bidifferential generator of a star product

    Args:
        chart (Chart): chart of the variables the generator differentiates
        n (int): number of coordinate pairs
        terms (tuple[GeneratorTerm]): the summands, coefficients are the
        multiples of l
        tag (GeneratorTag): wick, weyl-moyal, pointwise or custom
        expansion (Expansion): exp(P) or the first order 1 + P
    """

    chart: Chart
    n: int
    terms: tuple = ()
    tag: GeneratorTag = GeneratorTag.custom
    expansion: Expansion = Expansion.exponential
    # left/right slot pairs with their coefficients, filled at init
    slots: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        slots = []
        for t in self.terms:
            if t.left.chart != self.chart:
                raise StarProductError(
                    f"generator term in {t.left.name()} does not live on the {self.chart.value} chart"
                )
            try:
                slots.append((t.left.position(self.n), t.right.position(self.n), t.coeff))
            except PolyError as e:
                raise StarProductError(str(e)) from e
        object.__setattr__(self, "slots", tuple(slots))

    # ---------------------------------------------------------------------------
    # Built-ins
    # ---------------------------------------------------------------------------

    @classmethod
    def wick(cls, n: int = 1) -> "BidiffGenerator":
        terms = tuple(
            GeneratorTerm(VarSort(VarKind.z, k), VarSort(VarKind.zb, k), Scalar(2))
            for k in range(1, n + 1)
        )
        return cls(Chart.complex, n, terms, GeneratorTag.wick)

    @classmethod
    def weyl_moyal(cls, n: int = 1) -> "BidiffGenerator":
        half_i = I / 2
        terms = []
        for k in range(1, n + 1):
            q, p = VarSort(VarKind.q, k), VarSort(VarKind.p, k)
            terms += [GeneratorTerm(q, p, half_i), GeneratorTerm(p, q, -half_i)]
        return cls(Chart.phase_space, n, tuple(terms), GeneratorTag.weyl_moyal)

    @classmethod
    def pointwise(cls, chart: Chart = Chart.complex, n: int = 1) -> "BidiffGenerator":
        return cls(chart, n, (), GeneratorTag.pointwise)

    @classmethod
    def custom(
        cls,
        chart: Chart,
        n: int,
        terms: Iterable[GeneratorTerm],
        expansion: Expansion = Expansion.exponential,
        validate: bool = True,
        order: int = 2,
        degree: int = 2,
    ) -> "BidiffGenerator":
        """Build a user generator, property-testing associativity unless
        `validate` is False

        Raises:
            StarProductError: if the sampled associativity test fails
        """
        gen = cls(chart, n, tuple(terms), GeneratorTag.custom, expansion)
        if validate:
            result = assoc_check(gen, default_triple_samples(chart, n, degree), order)
            if not result.passed:
                f, g, h = result.witness
                raise StarProductError(
                    f"custom generator is not associative up to order {order}: witness ({f}, {g}, {h})"
                )
        return gen

    @classmethod
    def from_tag(cls, tag: Union[GeneratorTag, str], n: int = 1, chart: Chart = None) -> "BidiffGenerator":
        tag = GeneratorTag(tag)
        if tag == GeneratorTag.wick:
            return cls.wick(n)
        if tag == GeneratorTag.weyl_moyal:
            return cls.weyl_moyal(n)
        if tag == GeneratorTag.pointwise:
            return cls.pointwise(chart or Chart.complex, n)
        raise StarProductError("custom generators need explicit terms")

    def __str__(self) -> str:
        if not self.terms:
            return f"{self.tag.value}[{self.chart.value}, n={self.n}]"
        parts = [
            f"({t.coeff})*l*d/d{t.left.name(self.n)} x d/d{t.right.name(self.n)}"
            for t in self.terms
        ]
        return f"{self.tag.value}[{self.expansion.value}]: " + " + ".join(parts)


def describe(tag: Union[GeneratorTag, str]) -> str:
    """Human readable metadata of a built-in product"""
    info = PRODUCT_INFOS[GeneratorTag(tag)]
    return f"{info.tag.value} ({info.chart.value} chart)\n  {info.formula}\n  {info.reference}"


# ===============================================================================
#     Expansion
# ===============================================================================


@lru_cache(maxsize=4096)
def _bidiff_layers(
    slots: tuple, bound_f: tuple, bound_g: tuple, max_r: int, linear: bool
) -> tuple:
    """Coefficients of P^r / r! as dicts {(I, J): c} for r = 0..max_r, pruned
    to derivative multi-indices that do not annihilate the given degrees"""
    size = len(bound_f)
    layers = [{((0,) * size, (0,) * size): ONE}]
    top = min(max_r, 1) if linear else max_r
    for r in range(1, top + 1):
        nxt = {}
        for (a, b), c in layers[-1].items():
            for left, right, coeff in slots:
                a2 = multi_add(a, unit_index(size, left))
                b2 = multi_add(b, unit_index(size, right))
                if not (multi_leq(a2, bound_f) and multi_leq(b2, bound_g)):
                    continue
                nxt[(a2, b2)] = nxt.get((a2, b2), Scalar()) + c * coeff
        layers.append({k: v for k, v in nxt.items() if v})
        if not nxt:
            break
    # divide by r! once all paths are counted
    return tuple(
        {k: v / factorial(r) for k, v in layer.items()} for r, layer in enumerate(layers)
    )


def star_poly(f: Poly, g: Poly, gen: BidiffGenerator, max_r: int) -> list[Poly]:
    """l-coefficients (orders 0..max_r) of the star product of two
    polynomials"""
    zero = Poly.zero(gen.chart, gen.n)
    out = [zero] * (max_r + 1)
    if not f or not g:
        return out
    layers = _bidiff_layers(
        gen.slots,
        f.max_exponents(),
        g.max_exponents(),
        max_r,
        gen.expansion == Expansion.linear,
    )
    for r, layer in enumerate(layers):
        if r > max_r:
            break
        acc = out[r]
        for (a, b), c in layer.items():
            acc = acc + poly_mul(f.diff_multi(a), g.diff_multi(b)) * c
        out[r] = acc
    return out


def _as_series(f: PolyLike, gen: BidiffGenerator, order: int) -> TruncatedSeries:
    try:
        s = lift(f, order)
    except PolyError as e:
        raise StarProductError(str(e)) from e
    c = s.coeffs[0]
    if c.chart != gen.chart or c.n != gen.n:
        raise StarProductError(
            f"operand on the {c.chart.value} chart (n={c.n}) does not match the generator "
            f"{gen.tag.value} on the {gen.chart.value} chart (n={gen.n})"
        )
    return s


def star_multiply(f: PolyLike, g: PolyLike, gen: BidiffGenerator, order: int) -> TruncatedSeries:
    """Exact star product of two polynomials or series of polynomials,
    truncated at l^order

    Raises:
        StarProductError: chart or n mismatch with the generator, or series
        of another truncation order
    """
    fs, gs = _as_series(f, gen, order), _as_series(g, gen, order)
    out = [Poly.zero(gen.chart, gen.n)] * (order + 1)
    for a, fa in enumerate(fs.coeffs):
        if not fa:
            continue
        for b, gb in enumerate(gs.coeffs[: order + 1 - a]):
            if not gb:
                continue
            for r, c in enumerate(star_poly(fa, gb, gen, order - a - b)):
                if c:
                    out[a + b + r] = out[a + b + r] + c
    return TruncatedSeries(order, tuple(out))


def commutator(f: PolyLike, g: PolyLike, gen: BidiffGenerator, order: int) -> TruncatedSeries:
    """f * g - g * f"""
    return star_multiply(f, g, gen, order) - star_multiply(g, f, gen, order)


# ===============================================================================
#     Smoothing operators exp(l D)
# ===============================================================================


@dataclass(frozen=True)
class SmoothingOperator:
    """exp(l D) for a constant coefficient operator D = sum_I c_I d^I

    Args:
        chart (Chart): chart the operator acts on
        n (int): number of coordinate pairs
        terms (tuple): pairs (multi-index over the 2n slots, Scalar)
        name (str): label used in reports
    """

    chart: Chart
    n: int
    terms: tuple
    name: str = "custom"

    def apply_d(self, f: Poly) -> Poly:
        out = Poly.zero(self.chart, self.n)
        for index, c in self.terms:
            out = out + f.diff_multi(index) * c
        return out

    def apply(self, f: PolyLike, order: int = None) -> TruncatedSeries:
        """Exact exp(l D) f truncated at `order` (the order of f by default)

        Raises:
            SmoothingError: on a chart mismatch
        """
        if isinstance(f, Poly):
            order = 0 if order is None else order
        else:
            order = f.order if order is None else order
        try:
            fs = lift(f, order)
        except PolyError as e:
            raise SmoothingError(str(e)) from e
        c0 = fs.coeffs[0]
        if c0.chart != self.chart or c0.n != self.n:
            raise SmoothingError(
                f"{self.name} acts on the {self.chart.value} chart (n={self.n}), "
                f"got a polynomial on the {c0.chart.value} chart (n={c0.n})"
            )
        out = list(fs.coeffs)
        for a, fa in enumerate(fs.coeffs):
            cur = fa
            for r in range(1, order - a + 1):
                cur = self.apply_d(cur) / r
                if not cur:
                    break
                out[a + r] = out[a + r] + cur
        return TruncatedSeries(order, tuple(out))

    def inverse(self) -> "SmoothingOperator":
        return SmoothingOperator(
            self.chart, self.n, tuple((i, -c) for i, c in self.terms), f"{self.name}^-1"
        )

    def __str__(self) -> str:
        return self.name


def _second(size: int, i: int, j: int) -> tuple:
    return multi_add(unit_index(size, i), unit_index(size, j))


def n_operator(n: int = 1, inverse: bool = False) -> SmoothingOperator:
    """N = exp(l/(2i) sum_k d^2/dq_k dp_k) and its inverse"""
    size = 2 * n
    c = I / 2 if inverse else -I / 2
    terms = tuple((_second(size, k, n + k), c) for k in range(n))
    return SmoothingOperator(Chart.phase_space, n, terms, "N^-1" if inverse else "N")


def laplace_family(chart: Chart, n: int, c) -> SmoothingOperator:
    """exp(c l sum_k (d^2/dq_k^2 + d^2/dp_k^2)) on phase space,
    exp(c l sum_k d^2/dz_k dzb_k) on the complex chart"""
    c = Scalar.coerce(c)
    size = 2 * n
    if chart == Chart.phase_space:
        terms = tuple(
            (_second(size, k, k), c) for k in range(size)
        )
    else:
        terms = tuple((_second(size, k, n + k), c) for k in range(n))
    return SmoothingOperator(chart, n, terms if c else (), f"laplace({c})")


def apply_smoothing(f: PolyLike, op: SmoothingOperator, order: int = None) -> TruncatedSeries:
    return op.apply(f, order)


# ===============================================================================
#     Property checks
# ===============================================================================


def default_pair_samples(chart: Chart, n: int, degree: int = 2) -> list[Poly]:
    """Monomials of degree <= `degree` followed by one dense combination with
    non-real coefficients"""
    basis = monomial_basis(chart, n, degree)
    dense = Poly.zero(chart, n)
    for k, m in enumerate(basis):
        dense = dense + m * Scalar(k + 1, (-1) ** k)
    return basis + [dense]


def default_triple_samples(chart: Chart, n: int, degree: int = 2) -> list[Poly]:
    return monomial_basis(chart, n, degree)


def hermitian_check(
    gen: BidiffGenerator, samples: Sequence[PolyLike], order: int
) -> PropertyResult:
    """(f * g)* == g* * f* over all ordered pairs of samples"""
    tested = 0
    for f, g in itertools.product(samples, repeat=2):
        tested += 1
        lhs = star_multiply(f, g, gen, order).star()
        rhs = star_multiply(g.star(), f.star(), gen, order)
        if lhs != rhs:
            logger.debug(f"STAR: hermitian check failed on ({f}, {g})")
            return PropertyResult(False, (f, g), tested, f"{lhs} != {rhs}")
    return PropertyResult(True, None, tested)


def assoc_check(
    gen: BidiffGenerator, samples: Sequence[PolyLike], order: int
) -> PropertyResult:
    """(f * g) * h == f * (g * h) over all ordered triples of samples"""
    tested = 0
    for f, g, h in itertools.product(samples, repeat=3):
        tested += 1
        lhs = star_multiply(star_multiply(f, g, gen, order), h, gen, order)
        rhs = star_multiply(f, star_multiply(g, h, gen, order), gen, order)
        if lhs != rhs:
            logger.debug(f"STAR: associativity failed on ({f}, {g}, {h})")
            return PropertyResult(False, (f, g, h), tested, f"{lhs} != {rhs}")
    return PropertyResult(True, None, tested)
