import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Union

from dq_workbench.algebra.constants import Ordering
from dq_workbench.algebra.scalar import ONE, ZERO, Scalar

logger = logging.getLogger(__name__)


class SeriesError(Exception):
    """"""


def _coerce_coeff(value: Any) -> Any:
    """Exact numbers become Scalars, ring elements (Scalar, Poly) pass"""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Scalar(value)
    return value


def zero_of(value: Any) -> Any:
    """Zero element of the coefficient ring of `value`"""
    return _coerce_coeff(value) * 0


# ===============================================================================
#     Truncated formal series in lambda
# ===============================================================================


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Formal series sum_{r <= N} l^r c_r with a fixed truncation order N

    The coefficients are Scalars or polynomials; every operation between two
    series requires equal orders, re-truncation is only done by `with_order`.

    Args:
        order (int): truncation order N >= 0
        coeffs (tuple): the N+1 coefficients, index r holds the l^r coefficient
    """

    order: int
    coeffs: tuple

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 0:
            raise SeriesError(f"truncation order must be a non-negative int: {self.order!r}")
        coeffs = tuple(_coerce_coeff(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise SeriesError(
                f"series of order {self.order} needs {self.order + 1} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # ---------------------------------------------------------------------------
    # Constructors
    # ---------------------------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int, zero: Any = ZERO) -> "TruncatedSeries":
        """Build a series from the leading coefficients, padding with `zero`

        Raises:
            SeriesError: if a nonzero coefficient lies above `order`
        """
        coeffs = [_coerce_coeff(c) for c in coeffs]
        if any(coeffs[order + 1 :]):
            raise SeriesError(f"nonzero coefficient above truncation order {order}")
        coeffs = coeffs[: order + 1]
        if coeffs:
            zero = zero_of(coeffs[0])
        return cls(order, tuple(coeffs) + (zero,) * (order + 1 - len(coeffs)))

    @classmethod
    def constant(cls, value: Any, order: int) -> "TruncatedSeries":
        value = _coerce_coeff(value)
        return cls(order, (value,) + (zero_of(value),) * order)

    @classmethod
    def lam(cls, order: int, power: int = 1, coeff: Any = ONE) -> "TruncatedSeries":
        """coeff * l^power truncated at `order` (zero if power > order)"""
        coeff = _coerce_coeff(coeff)
        zero = zero_of(coeff)
        return cls(order, tuple(coeff if r == power else zero for r in range(order + 1)))

    @classmethod
    def zeros(cls, order: int, zero: Any = ZERO) -> "TruncatedSeries":
        return cls(order, (zero,) * (order + 1))

    # ---------------------------------------------------------------------------
    # Inspection
    # ---------------------------------------------------------------------------

    def __getitem__(self, r: int) -> Any:
        return self.coeffs[r]

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def valuation(self) -> Union[int, None]:
        """Lowest order with a nonzero coefficient, `None` for the zero series"""
        return next((r for r, c in enumerate(self.coeffs) if c), None)

    def leading(self) -> Any:
        v = self.valuation()
        return zero_of(self.coeffs[0]) if v is None else self.coeffs[v]

    def is_real(self) -> bool:
        return all(c.conj() == c for c in self.coeffs)

    def is_unit(self) -> bool:
        return bool(self.coeffs[0])

    def sign(self) -> int:
        """Sign in the lexicographic order of R[[l]]: sign of the lowest
        nonzero coefficient"""
        if not all(isinstance(c, Scalar) for c in self.coeffs):
            raise SeriesError("the order is only defined for scalar series")
        if not self.is_real():
            raise SeriesError(f"the order is only defined on real series: {self}")
        return self.leading().sign()

    # ---------------------------------------------------------------------------
    # Ring operations
    # ---------------------------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if other.order != self.order:
            raise SeriesError(
                f"mismatched truncation orders {self.order} and {other.order}"
            )

    def _lift(self, other) -> Union["TruncatedSeries", None]:
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return TruncatedSeries.constant(other, self.order)
        if hasattr(other, "chart"):  # a polynomial coefficient
            return TruncatedSeries.constant(other, self.order)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TruncatedSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return TruncatedSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return _cauchy(self, other)
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return TruncatedSeries(self.order, tuple(c * other for c in self.coeffs))
        if hasattr(other, "chart"):
            return TruncatedSeries(self.order, tuple(c * other for c in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return TruncatedSeries(self.order, tuple(other * c for c in self.coeffs))
        if hasattr(other, "chart"):
            return TruncatedSeries(self.order, tuple(other * c for c in self.coeffs))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return self * other.inverse()
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            inv = Scalar.coerce(other).inverse()
            return TruncatedSeries(self.order, tuple(c * inv for c in self.coeffs))
        return NotImplemented

    def inverse(self) -> "TruncatedSeries":
        """Inverse of a scalar unit series (nonzero constant coefficient)"""
        a = self.coeffs
        if not isinstance(a[0], Scalar) or not a[0]:
            raise SeriesError(f"series is not a unit: {self}")
        b0 = a[0].inverse()
        b = [b0]
        for k in range(1, self.order + 1):
            acc = ZERO
            for i in range(1, k + 1):
                if a[i]:
                    acc = acc + a[i] * b[k - i]
            b.append(-(b0 * acc))
        return TruncatedSeries(self.order, tuple(b))

    def conj(self) -> "TruncatedSeries":
        """Coefficient-wise conjugation, l is fixed"""
        return TruncatedSeries(self.order, tuple(c.conj() for c in self.coeffs))

    star = conj

    def abs2(self) -> "TruncatedSeries":
        return self.conj() * self

    # ---------------------------------------------------------------------------
    # Order manipulations
    # ---------------------------------------------------------------------------

    def shift_up(self, v: int) -> "TruncatedSeries":
        """Multiply by l^v, discarding what falls above the order"""
        zero = zero_of(self.coeffs[0])
        v = min(v, self.order + 1)
        return TruncatedSeries(self.order, (zero,) * v + self.coeffs[: self.order + 1 - v])

    def shift_down(self, v: int) -> "TruncatedSeries":
        """Divide by l^v; the top v coefficients are unknown and set to zero

        Raises:
            SeriesError: if the valuation is smaller than v
        """
        val = self.valuation()
        if val is not None and val < v:
            raise SeriesError(f"cannot divide a series of valuation {val} by l^{v}")
        zero = zero_of(self.coeffs[0])
        return TruncatedSeries(self.order, self.coeffs[v:] + (zero,) * v)

    def with_order(self, order: int) -> "TruncatedSeries":
        """Explicit re-truncation (or zero padding) to another order"""
        zero = zero_of(self.coeffs[0])
        coeffs = self.coeffs[: order + 1] + (zero,) * max(0, order - self.order)
        return TruncatedSeries(order, coeffs)

    def map(self, func: Callable[[Any], Any]) -> "TruncatedSeries":
        return TruncatedSeries(self.order, tuple(func(c) for c in self.coeffs))

    # ---------------------------------------------------------------------------
    # Comparison and literal
    # ---------------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __str__(self) -> str:
        from dq_workbench.algebra.literals import format_series

        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, '{self}')"


def _cauchy(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    zero = zero_of(a.coeffs[0]) * zero_of(b.coeffs[0])
    out = [zero] * (a.order + 1)
    for i, ai in enumerate(a.coeffs):
        if not ai:
            continue
        for j, bj in enumerate(b.coeffs[: a.order + 1 - i]):
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return TruncatedSeries(a.order, tuple(out))


################################################################################
##  Module level operations ####################################################
################################################################################


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    """Exact add, sub or mul of two series of the same order

    Args:
        a (TruncatedSeries): left operand
        b (TruncatedSeries): right operand
        op (str): one of "add", "sub", "mul"

    Raises:
        SeriesError: mismatched orders or unknown operation
    """
    if not isinstance(a, TruncatedSeries) or not isinstance(b, TruncatedSeries):
        raise SeriesError("series_arith expects two TruncatedSeries")
    a._check(b)
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__}
    if op not in ops:
        raise SeriesError(f"unknown series operation {op!r}, expected one of {list(ops)}")
    return ops[op](b)


def series_cmp(a: TruncatedSeries, b: TruncatedSeries) -> Ordering:
    """Lexicographic comparison on R[[l]]: sign of the lowest nonzero
    coefficient of a - b

    Raises:
        SeriesError: non-real coefficients or mismatched orders
    """
    a._check(b)
    if not a.is_real() or not b.is_real():
        raise SeriesError("series_cmp is only defined on real series")
    return Ordering((a - b).sign())


def series_conj(a: TruncatedSeries) -> TruncatedSeries:
    return a.conj()
