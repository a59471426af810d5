from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

################################################################################
##  Diverse CONSTANTS for the workbench ########################################
################################################################################

SUCCESS = {True: "PASS", False: "FAIL"}

SERIES_SYMBOL = "l"  # formal parameter lambda in literals
IMAG_SUFFIX = "i"

MAX_DEGREE = 6
MAX_ORDER = 8
MAX_N = 3

DEFORM_GRID_EXPONENT = 16  # grid of denominators 2**16
DEFORM_CAP = Fraction(4)

DEFAULT_SEED = 0
DEFAULT_OBSERVABLE_DEGREE = 2
DEFAULT_SAMPLE_DEGREE = 2
DEFAULT_PAIR_DEGREE = 4
DEFAULT_QUADRATIC_VECTORS = 10_000


class Chart(Enum):
    complex = "complex"
    phase_space = "phase-space"


class VarKind(Enum):
    z = "z"
    zb = "zb"
    q = "q"
    p = "p"


# the first kind of each chart fills the first n slots of an exponent tuple
CHART_KINDS = {
    Chart.complex: (VarKind.z, VarKind.zb),
    Chart.phase_space: (VarKind.q, VarKind.p),
}


class GeneratorTag(Enum):
    pointwise = "pointwise"
    wick = "wick"
    weyl_moyal = "weyl-moyal"
    custom = "custom"


class Expansion(Enum):
    exponential = "exponential"
    linear = "linear"


class Ordering(Enum):
    less = -1
    equal = 0
    greater = 1


class FunctionalKind(Enum):
    delta_origin = "delta-origin"
    smoothed_delta = "smoothed-delta"
    gaussian_moment = "gaussian-moment"
    table = "table"


class CheckName(Enum):
    gram = "gram"
    psd = "psd"
    kernel = "kernel"
    gns = "gns"
    classical_limit = "classical-limit"
    theorem = "theorem"
    no_go = "no-go"
    ideal_reduction = "ideal-reduction"
    schrodinger_op = "schrodinger-op"
    schrodinger_apply = "schrodinger-apply"
    schrodinger_member = "schrodinger-member"
    assoc = "assoc"
    hermitian = "hermitian"
    deform = "deform"


################################################################################
##  Descriptions of the built-in products ######################################
################################################################################


@dataclass(frozen=True)
class ProductInfo(object):
    """Metadata of a built-in star product

    tag: name used in configs and on the command line

    chart: chart on which the product is defined

    formula: expansion of the product as printed by `describe`
    """

    tag: GeneratorTag
    chart: Chart
    formula: str
    reference: str


PRODUCT_INFOS = {
    GeneratorTag.wick: ProductInfo(
        GeneratorTag.wick,
        Chart.complex,
        "f * g = sum_r (2l)^r/r! sum_|I|=r d^I f/dz^I d^I g/dzb^I",
        "Wick product, Bargmann-Fock representation",
    ),
    GeneratorTag.weyl_moyal: ProductInfo(
        GeneratorTag.weyl_moyal,
        Chart.phase_space,
        "f * g = mu o exp((i l/2) sum_k (d/dq_k x d/dp_k - d/dp_k x d/dq_k)) (f x g)",
        "Weyl-Moyal product, Schroedinger representation",
    ),
    GeneratorTag.pointwise: ProductInfo(
        GeneratorTag.pointwise,
        Chart.complex,
        "f * g = f g (undeformed, either chart)",
        "classical pointwise product",
    ),
}
