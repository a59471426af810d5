"""Parser and printer of the exact literals used in configs and reports.

Literals follow the syntax
    scalar   "3/2", "-1i", "(2+1i)"
    series   "1 - 3/2*l + (2+1i)*l^2"        (l is the formal parameter)
    poly     "2*z*zb^2 - 1/3", "q^2 + p^2"
and print back in the global order (powers of l first, then monomials), so
that parse(format(x)) == x.
"""
import logging
import re
from fractions import Fraction
from tokenize import TokenError
from typing import Iterable

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations
from sympy.polys.polyerrors import BasePolynomialError

from dq_workbench.algebra.constants import SERIES_SYMBOL, Chart
from dq_workbench.algebra.scalar import Scalar
from dq_workbench.algebra.series import TruncatedSeries

logger = logging.getLogger(__name__)


class LiteralError(Exception):
    """"""


_IMAG_RE = re.compile(r"(\d)i\b")
LAMBDA = sympy.Symbol(SERIES_SYMBOL)


# ===============================================================================
#     Parsing
# ===============================================================================


def _to_expr(text: str, symbols: dict) -> sympy.Expr:
    """Parse a literal into an expanded sympy expression in `symbols`"""
    if not isinstance(text, str) or not text.strip():
        raise LiteralError(f"empty or non-text literal: {text!r}")
    source = _IMAG_RE.sub(r"\1*I", text).replace("^", "**")
    local = dict(symbols)
    local["I"] = sympy.I
    try:
        expr = parse_expr(source, local_dict=local, transformations=standard_transformations)
    except (SyntaxError, TokenError, TypeError, ValueError, sympy.SympifyError) as e:
        raise LiteralError(f"cannot parse literal {text!r}: {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise LiteralError(f"literal {text!r} is not an expression")
    unknown = expr.free_symbols - set(symbols.values())
    if unknown:
        raise LiteralError(
            f"unknown symbol(s) {sorted(str(s) for s in unknown)} in literal {text!r}"
        )
    return sympy.expand(expr)


def _to_scalar(coeff: sympy.Expr, text: str) -> Scalar:
    re_part, im_part = coeff.as_real_imag()
    if not (re_part.is_Rational and im_part.is_Rational):
        raise LiteralError(
            f"coefficient {coeff} in {text!r} is not an exact Gaussian rational"
        )
    return Scalar(
        Fraction(int(re_part.p), int(re_part.q)),
        Fraction(int(im_part.p), int(im_part.q)),
    )


def _to_terms(expr: sympy.Expr, gens: list, text: str) -> dict:
    try:
        poly = sympy.Poly(expr, *gens)
    except BasePolynomialError as e:
        raise LiteralError(f"literal {text!r} is not polynomial: {e}") from e
    terms = {}
    for monom, coeff in poly.terms():
        if coeff == 0:
            continue
        terms[tuple(int(e) for e in monom)] = _to_scalar(coeff, text)
    return terms


def _poly_symbols(chart: Chart, n: int) -> tuple[dict, list]:
    from dq_workbench.algebra.poly import name_aliases

    aliases = name_aliases(chart, n)
    gens = [sympy.Symbol(f"_x{k}") for k in range(2 * n)]
    return {name: gens[pos] for name, pos in aliases.items()}, gens


def parse_scalar(text: str) -> Scalar:
    """Parse a Gaussian rational literal like "-3/2", "1i" or "(2+1i)" """
    expr = _to_expr(text, {})
    return _to_scalar(expr, text)


def parse_series(text: str, order: int) -> TruncatedSeries:
    """Parse a scalar series literal in l

    Raises:
        LiteralError: syntax errors, inexact coefficients or a power of l above
        `order`
    """
    terms = _to_terms(_to_expr(text, {SERIES_SYMBOL: LAMBDA}), [LAMBDA], text)
    coeffs = [Scalar()] * (order + 1)
    for (r,), c in terms.items():
        if r > order:
            raise LiteralError(f"term l^{r} of {text!r} lies above the order {order}")
        coeffs[r] = c
    return TruncatedSeries(order, tuple(coeffs))


def parse_poly(text: str, chart: Chart, n: int):
    """Parse a polynomial literal of the given chart"""
    from dq_workbench.algebra.poly import Poly

    symbols, gens = _poly_symbols(chart, n)
    terms = _to_terms(_to_expr(text, symbols), gens, text)
    return Poly(chart, n, terms)


def parse_series_poly(text: str, chart: Chart, n: int, order: int) -> TruncatedSeries:
    """Parse a polynomial literal whose coefficients may contain powers of l"""
    from dq_workbench.algebra.poly import Poly

    symbols, gens = _poly_symbols(chart, n)
    symbols[SERIES_SYMBOL] = LAMBDA
    terms = _to_terms(_to_expr(text, symbols), [LAMBDA] + gens, text)
    by_order = [dict() for _ in range(order + 1)]
    for monom, c in terms.items():
        if monom[0] > order:
            raise LiteralError(f"term l^{monom[0]} of {text!r} lies above the order {order}")
        by_order[monom[0]][monom[1:]] = c
    return TruncatedSeries(order, tuple(Poly(chart, n, t) for t in by_order))


# ===============================================================================
#     Printing
# ===============================================================================


def _lambda_label(r: int) -> str:
    return "" if r == 0 else SERIES_SYMBOL if r == 1 else f"{SERIES_SYMBOL}^{r}"


def _term(coeff: Scalar, label: str) -> tuple[bool, str]:
    """(negative, body) of a single signed term"""
    if coeff.is_real:
        mag = Scalar(abs(coeff.re))
        if not label:
            body = str(mag)
        else:
            body = label if mag == 1 else f"{mag}*{label}"
        return coeff.re < 0, body
    return False, f"({coeff})" if not label else f"({coeff})*{label}"


def _join(terms: list[tuple[bool, str]]) -> str:
    if not terms:
        return "0"
    out = ""
    for k, (neg, body) in enumerate(terms):
        if k == 0:
            out = f"-{body}" if neg else body
        else:
            out = f"{out} {'-' if neg else '+'} {body}"
    return out


def _label(*parts: str) -> str:
    return "*".join(p for p in parts if p)


def format_poly(f) -> str:
    return _join([_term(c, f.monomial_label(e)) for e, c in f.sorted_terms()])


def format_series(series: TruncatedSeries) -> str:
    """Print a scalar series or a series of polynomials as one literal"""
    terms = []
    for r, c in enumerate(series.coeffs):
        lam = _lambda_label(r)
        if isinstance(c, Scalar):
            if c:
                terms.append(_term(c, lam))
        else:
            terms.extend(_term(a, _label(lam, c.monomial_label(e))) for e, a in c.sorted_terms())
    return _join(terms)


def format_vector(vector: Iterable[TruncatedSeries]) -> list[str]:
    return [format_series(v) for v in vector]


def format_matrix(matrix) -> list[list[str]]:
    return [[format_series(x) for x in row] for row in matrix]
