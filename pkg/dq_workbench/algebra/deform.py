import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from dq_workbench.algebra.constants import DEFORM_CAP, DEFORM_GRID_EXPONENT
from dq_workbench.algebra.functional import (
    ClassicalPart,
    Functional,
    FunctionalError,
    GramForm,
    SmoothedFunctional,
    gram_matrix,
)
from dq_workbench.algebra.psd import KernelBasis, PsdVerdict, kernel_extract, psd_decide
from dq_workbench.algebra.star import BidiffGenerator, laplace_family

logger = logging.getLogger(__name__)


# ===============================================================================
#     Positive deformation search
# ===============================================================================


@dataclass
class DeformationReport:
    """Outcome of `deform_functional`

    c: minimal template parameter found, None on failure

    trials: every (c, psd?) evaluated, in evaluation order

    functional, gram, verdict: at the returned c (at the cap on failure)

    kernel: kernel of the resulting gram form when it is psd
    """

    passed: bool
    c: Union[Fraction, None]
    cap: Fraction
    trials: list = field(default_factory=list)
    functional: Functional = None
    gram: GramForm = None
    verdict: PsdVerdict = None
    kernel: Union[KernelBasis, None] = None


def template(omega0: Functional, c: Fraction) -> SmoothedFunctional:
    """omega_c = omega_0 o exp(c l L) with L the Laplacian of the chart"""
    return SmoothedFunctional.smooth(omega0, laplace_family(omega0.chart, omega0.n, c))


def classically_positive(omega0: Functional, d: int) -> PsdVerdict:
    """PSD decision of the order 0 part for the pointwise product"""
    classical = ClassicalPart.of(omega0)
    gen = BidiffGenerator.pointwise(omega0.chart, omega0.n)
    return psd_decide(gram_matrix(classical, gen, d))


def deform_functional(
    omega0: Functional,
    gen: BidiffGenerator,
    d: int,
    order: int = None,
    cap: Fraction = DEFORM_CAP,
    grid_exponent: int = DEFORM_GRID_EXPONENT,
) -> DeformationReport:
    """Search the smallest c on the grid k / 2^grid_exponent in [0, cap] for
    which the gram form of omega_c is psd up to `order`

    Raises:
        FunctionalError: omega0 is not classically positive on degree <= d
    """
    order = omega0.order if order is None else order
    omega0 = omega0.with_order(order)
    cap = Fraction(cap)
    pre = classically_positive(omega0, d)
    if not pre.is_psd:
        raise FunctionalError(
            f"{omega0.label()} is not classically positive on degree <= {d}: "
            f"witness value {pre.value}"
        )

    trials = []
    cache = {}

    def evaluate(c: Fraction) -> tuple[SmoothedFunctional, GramForm, PsdVerdict]:
        if c not in cache:
            omega_c = template(omega0, c)
            gram = gram_matrix(omega_c, gen, d)
            verdict = psd_decide(gram)
            trials.append((c, verdict.is_psd))
            logger.debug(f"DEFORM: c={c} -> {verdict.label()}")
            cache[c] = (omega_c, gram, verdict)
        return cache[c]

    def report(c: Fraction, passed: bool) -> DeformationReport:
        omega_c, gram, verdict = evaluate(c)
        kernel = kernel_extract(gram, verdict) if verdict.is_psd else None
        return DeformationReport(
            passed, c if passed else None, cap, trials, omega_c, gram, verdict, kernel
        )

    if evaluate(Fraction(0))[2].is_psd:
        return report(Fraction(0), True)
    if not evaluate(cap)[2].is_psd:
        logger.warning(f"DEFORM: no psd template parameter up to the cap {cap}")
        return report(cap, False)

    # invariant: lo fails, hi passes
    scale = 2**grid_exponent

    def point(k: int) -> Fraction:
        return min(Fraction(k, scale), cap)

    lo, hi = 0, math.ceil(cap * scale)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if evaluate(point(mid))[2].is_psd:
            hi = mid
        else:
            lo = mid
    c = point(hi)
    logger.info(f"DEFORM: minimal template parameter c = {c}")
    return report(c, True)
