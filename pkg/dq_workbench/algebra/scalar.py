import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from dq_workbench.algebra.utils import format_fraction, to_fraction

logger = logging.getLogger(__name__)


class ScalarError(Exception):
    """"""


ScalarLike = Union["Scalar", int, Fraction]


# ===============================================================================
#     Gaussian rational
# ===============================================================================


@dataclass(frozen=True, eq=False)
class Scalar:
    """Gaussian rational re + im*i with exact rational parts

    Args:
        re (Fraction): real part
        im (Fraction): imaginary part
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        try:
            object.__setattr__(self, "re", to_fraction(self.re))
            object.__setattr__(self, "im", to_fraction(self.im))
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ScalarError(f"invalid scalar parts ({self.re!r}, {self.im!r})") from e

    @classmethod
    def coerce(cls, value: Union[ScalarLike, str]) -> "Scalar":
        """Return `value` as a Scalar; strings are read as scalar literals"""
        if isinstance(value, Scalar):
            return value
        if isinstance(value, str):
            from dq_workbench.algebra.literals import parse_scalar

            return parse_scalar(value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(Fraction(value))
        raise ScalarError(f"cannot convert {value!r} to an exact scalar")

    # ---------------------------------------------------------------------------
    # Properties
    # ---------------------------------------------------------------------------

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def sign(self) -> int:
        """Sign of a real scalar"""
        if not self.is_real:
            raise ScalarError(f"sign of the non-real scalar {self}")
        return (self.re > 0) - (self.re < 0)

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> "Scalar":
        """|s|^2 = s conj(s), a non-negative real scalar"""
        return Scalar(self.re * self.re + self.im * self.im)

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ScalarError("division by the zero scalar")
        return Scalar(self.re / n, -self.im / n)

    # ---------------------------------------------------------------------------
    # Arithmetic
    # ---------------------------------------------------------------------------

    @staticmethod
    def _other(other) -> Union["Scalar", None]:
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar(Fraction(other))
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Scalar(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __eq__(self, other) -> bool:
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        # consistent with the hash of an equal int or Fraction
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    # ---------------------------------------------------------------------------
    # Literal
    # ---------------------------------------------------------------------------

    def __str__(self) -> str:
        """Literal form: "3/2", "1i", "-1/2i", "2+1i" """
        if self.im == 0:
            return format_fraction(self.re)
        im = f"{format_fraction(abs(self.im))}i"
        if self.re == 0:
            return im if self.im > 0 else f"-{im}"
        sign = "+" if self.im > 0 else "-"
        return f"{format_fraction(self.re)}{sign}{im}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


ZERO = Scalar()
ONE = Scalar(1)
I = Scalar(0, 1)
