from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterator, Union

################################################################################
##  Conversion functions for exact values ######################################
################################################################################

Rational = Union[int, Fraction]


def to_fraction(value: Union[int, Fraction, str]) -> Fraction:
    """Convert an exact value to a `Fraction`

    Args:
        value (Union[int, Fraction, str]): integer, fraction or a rational
        literal like "3/2" or "-4"

    Raises:
        TypeError: for floats, booleans or other inexact values

    Returns:
        Fraction: exact rational
    """
    if isinstance(value, bool):
        raise TypeError(f"booleans are not exact rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE"):
            raise TypeError(f"floating point literal not allowed: {value!r}")
        return Fraction(text)
    raise TypeError(f"inexact or unsupported rational value: {value!r}")


def format_fraction(value: Fraction) -> str:
    """Return the literal of a rational: "3/2", "-1", "0"

    Args:
        value (Fraction): rational to format

    Returns:
        str: `p/q` representation, `p` alone if the denominator is 1
    """
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


################################################################################
##  Multi-index helpers ########################################################
################################################################################


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1), zero when k > n"""
    if k > n:
        return 0
    return prod(range(n - k + 1, n + 1))


def double_factorial(n: int) -> int:
    """n!! with the convention (-1)!! = 0!! = 1"""
    return prod(range(n, 0, -2)) if n > 0 else 1


def gaussian_moment(k: int) -> int:
    """k-th moment of the standard normal law: (k-1)!! for even k, 0 for odd"""
    return 0 if k % 2 else double_factorial(k - 1)


def multi_factorial(index: tuple[int, ...]) -> int:
    """I! = prod of the factorials of the exponents"""
    return prod(factorial(i) for i in index)


def multi_binomial(upper: tuple[int, ...], lower: tuple[int, ...]) -> int:
    """prod_k C(upper_k, lower_k)"""
    return prod(comb(u, l) for u, l in zip(upper, lower))


def multi_leq(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def multi_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def multi_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def unit_index(size: int, position: int, value: int = 1) -> tuple[int, ...]:
    """Multi-index with `value` at `position` and zeros elsewhere"""
    return tuple(value if k == position else 0 for k in range(size))


def compositions(size: int, total: int) -> Iterator[tuple[int, ...]]:
    """Yield all multi-indices of length `size` with |I| = `total`

    the multi-indices come in decreasing lexicographic order, e.g. for size 2
    and total 2: (2, 0), (1, 1), (0, 2)
    """
    if size == 0:
        if total == 0:
            yield ()
        return
    if size == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(size - 1, total - first):
            yield (first,) + rest


def sub_indices(index: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Yield every multi-index K <= `index` (componentwise)"""
    if not index:
        yield ()
        return
    for first in range(index[0] + 1):
        for rest in sub_indices(index[1:]):
            yield (first,) + rest


def monomial_key(exponents: tuple[int, ...]) -> tuple:
    """Sort key of the global monomial order: total degree, then lexicographic
    with larger leading exponents first (1 < z < zb < z^2 < z zb < zb^2)"""
    return (sum(exponents), tuple(-e for e in exponents))


if __name__ == "__main__":
    """"""
    print(list(compositions(2, 2)))
    print(sorted([(0, 1), (1, 0), (0, 0)], key=monomial_key))
