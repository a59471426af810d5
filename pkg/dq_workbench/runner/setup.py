"""Scenario configuration: TOML file -> setup objects -> resolved scenario.

A scenario file is a flat TOML document with optional sub-tables
`[functional]`, `[generator]`, `[deform]`, `[schrodinger]`, `[properties]`
and `[expect]`, e.g.

    name = "wick_delta"
    product = "wick"
    degree = 2
    order = 2
    observables = ["z", "zb"]
    checks = ["gram", "psd", "kernel", "gns"]

    [functional]
    kind = "delta-origin"
"""
import logging
import os
import re
import tomllib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

from glob_utils.file.json_utils import save_to_json

from dq_workbench.algebra.constants import (
    DEFAULT_PAIR_DEGREE,
    DEFAULT_QUADRATIC_VECTORS,
    DEFAULT_SAMPLE_DEGREE,
    DEFAULT_SEED,
    DEFORM_CAP,
    DEFORM_GRID_EXPONENT,
    MAX_DEGREE,
    MAX_N,
    MAX_ORDER,
    PRODUCT_INFOS,
    Chart,
    CheckName,
    Expansion,
    FunctionalKind,
    GeneratorTag,
)
from dq_workbench.algebra.functional import (
    DeltaOrigin,
    Functional,
    FunctionalError,
    GaussianMoment,
    SmoothedFunctional,
    TableFunctional,
)
from dq_workbench.algebra.gns import default_observables
from dq_workbench.algebra.literals import LiteralError, parse_scalar, parse_series_poly
from dq_workbench.algebra.poly import PolyError, VarSort, leading_exponent, monomial_basis, series_degree
from dq_workbench.algebra.sampling import make_rng, random_faithful_table
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.star import (
    BidiffGenerator,
    GeneratorTerm,
    SmoothingError,
    StarProductError,
    laplace_family,
    n_operator,
)

logger = logging.getLogger(__name__)

RANDOM_TABLE = "random-table"
FUNCTIONAL_KINDS = [k.value for k in FunctionalKind] + [RANDOM_TABLE]
SMOOTHINGS = ["laplace", "n-operator", "n-inverse"]
# checks evaluating the functional above level 2d
LEVEL_RAISING_CHECKS = {CheckName.gns, CheckName.classical_limit, CheckName.theorem, CheckName.no_go}


class ScenarioError(Exception):
    """Invalid scenario; `key` names the offending config key when known"""

    def __init__(self, message: str, key: str = None) -> None:
        super().__init__(message)
        self.key = key


# ===============================================================================
#     Setup Base Class
# ===============================================================================


class SetupBase(object):
    def set_from_dict(self, **kwargs):
        """Set attributes by passing kwargs or a dict.
        Kwargs should be equivalent to self.__dict__, nested setups are
        filled recursively.

        Raises:
            ScenarioError: on keys without a matching attribute
        """
        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ScenarioError(f"unknown key {k!r} in {type(self).__name__}", k)
            if isinstance(getattr(self, k), SetupBase):
                if not isinstance(v, dict):
                    raise ScenarioError(f"{k!r} must be a table", k)
                getattr(self, k).set_from_dict(**v)
            else:
                setattr(self, k, v)

    def to_dict(self) -> dict:
        return {
            k: v.to_dict() if isinstance(v, SetupBase) else v for k, v in self.__dict__.items()
        }


def _check_int(value: Any, key: str, lo: int, hi: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not lo <= value <= hi:
        raise ScenarioError(f"{key} must be an integer in {lo}..{hi}, got {value!r}", key)
    return value


def _check_choice(value: Any, key: str, choices: list[str]) -> str:
    if value not in choices:
        raise ScenarioError(f"{key} must be one of {choices}, got {value!r}", key)
    return value


def _literal(text: Any, key: str, chart: Chart, n: int, order: int) -> TruncatedSeries:
    try:
        return parse_series_poly(str(text), chart, n, order)
    except (LiteralError, PolyError) as e:
        raise ScenarioError(f"invalid {key} literal {text!r}: {e}", key) from e


# ===============================================================================
#     Sub setups
# ===============================================================================


class FunctionalSetup(SetupBase):
    """State of the scenario

    kind: delta-origin, smoothed-delta, gaussian-moment, table or
    random-table

    smoothing: operator of a smoothed-delta (laplace with parameter c,
    n-operator or n-inverse)

    table: monomial literal -> series literal, for kind table
    """

    kind: str
    smoothing: str
    c: str
    table: dict
    name: str
    components: int

    def __init__(self) -> None:
        self.reinit()

    def reinit(self) -> None:
        self.kind = FunctionalKind.delta_origin.value
        self.smoothing = "laplace"
        self.c = "0"
        self.table = {}
        self.name = "table"
        self.components = 2

    def build(self, chart: Chart, n: int, order: int, need: int, seed: int) -> Functional:
        """Functional on `chart`, tabulated (or checked) up to degree `need`

        Raises:
            ScenarioError: unknown kind, bad literals or missing table entries
        """
        kind = _check_choice(self.kind, "kind", FUNCTIONAL_KINDS)
        try:
            if kind == FunctionalKind.delta_origin.value:
                return DeltaOrigin(chart, n, order)
            if kind == FunctionalKind.gaussian_moment.value:
                return GaussianMoment(chart, n, order)
            if kind == FunctionalKind.smoothed_delta.value:
                return SmoothedFunctional.smooth(DeltaOrigin(chart, n, order), self.smoothing_operator(chart, n))
            if kind == RANDOM_TABLE:
                _check_int(self.components, "components", 1, 8)
                return random_faithful_table(make_rng(seed), chart, n, order, need, self.components)
            table = TableFunctional.from_literals(chart, n, order, dict(self.table), self.name)
        except (FunctionalError, SmoothingError, LiteralError) as e:
            raise ScenarioError(f"invalid functional: {e}", "kind" if kind != "table" else "table") from e
        for m in monomial_basis(chart, n, need):
            if leading_exponent(m) not in table.entries:
                raise ScenarioError(
                    f"functional table {self.name!r} is missing the monomial {m} "
                    f"(needed up to degree {need})",
                    "table",
                )
        if not table.check_reality():
            raise ScenarioError(f"functional table {self.name!r} is not real: omega(m*) != conj(omega(m))", "table")
        return table

    def smoothing_operator(self, chart: Chart, n: int):
        smoothing = _check_choice(self.smoothing, "smoothing", SMOOTHINGS)
        if smoothing == "laplace":
            try:
                c = parse_scalar(str(self.c))
            except LiteralError as e:
                raise ScenarioError(f"invalid smoothing parameter c = {self.c!r}: {e}", "c") from e
            return laplace_family(chart, n, c)
        if chart != Chart.phase_space:
            raise ScenarioError("the N operator acts on the phase-space chart", "smoothing")
        return n_operator(n, inverse=smoothing == "n-inverse")


class GeneratorSetup(SetupBase):
    """Terms of a custom product, as a list of tables
    {left = "q", right = "p", coeff = "1i/2"}"""

    terms: list
    expansion: str
    validate: bool

    def __init__(self) -> None:
        self.reinit()

    def reinit(self) -> None:
        self.terms = []
        self.expansion = Expansion.exponential.value
        self.validate = True

    def build(self, tag: GeneratorTag, chart: Chart, n: int, order: int) -> BidiffGenerator:
        if tag != GeneratorTag.custom:
            return BidiffGenerator.from_tag(tag, n, chart)
        expansion = Expansion(_check_choice(self.expansion, "expansion", [e.value for e in Expansion]))
        terms = []
        for t in self.terms:
            try:
                terms.append(GeneratorTerm(VarSort.parse(t["left"]), VarSort.parse(t["right"]), parse_scalar(str(t["coeff"]))))
            except (KeyError, TypeError) as e:
                raise ScenarioError(f"generator term {t!r} needs left, right and coeff", "terms") from e
            except (PolyError, LiteralError) as e:
                raise ScenarioError(f"invalid generator term {t!r}: {e}", "terms") from e
        for t in terms:
            if t.left.chart != chart or t.right.chart != chart:
                raise ScenarioError(f"generator term {t} does not live on the {chart.value} chart", "terms")
        try:
            return BidiffGenerator.custom(chart, n, terms, expansion, bool(self.validate), order=min(order, 2))
        except StarProductError as e:
            raise ScenarioError(str(e), "terms") from e


class DeformSetup(SetupBase):
    cap: str
    grid_exponent: int

    def __init__(self) -> None:
        self.reinit()

    def reinit(self) -> None:
        self.cap = str(DEFORM_CAP)
        self.grid_exponent = DEFORM_GRID_EXPONENT

    def get_cap(self) -> Fraction:
        try:
            cap = parse_scalar(str(self.cap))
        except LiteralError as e:
            raise ScenarioError(f"invalid deform cap {self.cap!r}: {e}", "cap") from e
        if not cap.is_real or cap.re <= 0:
            raise ScenarioError(f"deform cap must be a positive rational, got {self.cap!r}", "cap")
        _check_int(self.grid_exponent, "grid_exponent", 0, 32)
        return cap.re


class SchrodingerSetup(SetupBase):
    """Phase-space observables for the Schroedinger checks

    operators: symbols whose operator rho(f) is extracted

    apply: pairs [f, psi]

    members: symbol -> expected membership in the Weyl Gel'fand ideal

    random_pairs: number of random symbol pairs of degree <= pair_degree
    added to the homomorphism and adjoint checks
    """

    operators: list
    apply: list
    members: dict
    random_pairs: int
    pair_degree: int

    def __init__(self) -> None:
        self.reinit()

    def reinit(self) -> None:
        self.operators = ["q", "p"]
        self.apply = []
        self.members = {}
        self.random_pairs = 0
        self.pair_degree = DEFAULT_PAIR_DEGREE


class PropertySetup(SetupBase):
    """Sample sizes of the randomized property checks"""

    sample_degree: int
    random_samples: int
    quadratic_vectors: int

    def __init__(self) -> None:
        self.reinit()

    def reinit(self) -> None:
        self.sample_degree = DEFAULT_SAMPLE_DEGREE
        self.random_samples = 0
        self.quadratic_vectors = DEFAULT_QUADRATIC_VECTORS


# ===============================================================================
#     Scenario Setup
# ===============================================================================


class ScenarioSetup(SetupBase):
    """All user settings of a scenario, see the module doc for the format"""

    name: str
    description: str
    product: str
    chart: str
    n: int
    degree: int
    order: int
    seed: int
    observables: list
    checks: list
    expect: dict
    functional: FunctionalSetup
    generator: GeneratorSetup
    deform: DeformSetup
    schrodinger: SchrodingerSetup
    properties: PropertySetup

    def __init__(self) -> None:
        self.functional = FunctionalSetup()
        self.generator = GeneratorSetup()
        self.deform = DeformSetup()
        self.schrodinger = SchrodingerSetup()
        self.properties = PropertySetup()
        self.reinit()

    def reinit(self) -> None:
        self.name = "scenario"
        self.description = ""
        self.product = GeneratorTag.wick.value
        self.chart = ""
        self.n = 1
        self.degree = 1
        self.order = 1
        self.seed = DEFAULT_SEED
        self.observables = []
        self.checks = []
        self.expect = {}
        for sub in (self.functional, self.generator, self.deform, self.schrodinger, self.properties):
            sub.reinit()

    def save(self, path: str) -> None:
        """Write the normalised setup as JSON"""
        save_to_json(path, self.to_dict())
        logger.info(f"SETUP: saved scenario {self.name!r} to {path}")

    def resolve(self) -> "Scenario":
        """Validate the settings and build the algebraic objects

        Raises:
            ScenarioError: first invalid setting, with its key
        """
        if not isinstance(self.name, str) or not self.name:
            raise ScenarioError("scenario name must be a non-empty string", "name")
        tag = GeneratorTag(_check_choice(self.product, "product", [t.value for t in GeneratorTag]))
        chart = self._resolve_chart(tag)
        n = _check_int(self.n, "n", 1, MAX_N)
        degree = _check_int(self.degree, "degree", 0, MAX_DEGREE)
        order = _check_int(self.order, "order", 0, MAX_ORDER)
        seed = _check_int(self.seed, "seed", 0, 2**63 - 1)
        if not isinstance(self.checks, list) or not self.checks:
            raise ScenarioError("checks must be a non-empty list", "checks")
        checks = [CheckName(_check_choice(c, "checks", [k.value for k in CheckName])) for c in self.checks]
        expect = {}
        for key, value in dict(self.expect).items():
            check = CheckName(_check_choice(key, key, [c.value for c in checks]))
            if not isinstance(value, bool):
                raise ScenarioError(f"expected outcome of {key} must be true or false", key)
            expect[check] = value

        obs_literals = list(self.observables)
        observables = [_literal(o, "observables", chart, n, order) for o in obs_literals]
        if not observables:
            observables = [TruncatedSeries.constant(o, order) for o in default_observables(chart, n)]
        obs_degree = max((series_degree(o) for o in observables), default=1)

        need = 2 * degree
        if LEVEL_RAISING_CHECKS & set(checks):
            need = 2 * (degree + max(obs_degree, 1))
        functional = self.functional.build(chart, n, order, need, seed)
        generator = self.generator.build(tag, chart, n, order)

        ph = Chart.phase_space
        sch = self.schrodinger
        operators = [(str(o), _literal(o, "operators", ph, n, order)) for o in sch.operators]
        applies = []
        for pair in sch.apply:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ScenarioError(f"apply entries are [f, psi] pairs, got {pair!r}", "apply")
            applies.append((_literal(pair[0], "apply", ph, n, order), _literal(pair[1], "apply", ph, n, order)))
        members = []
        for text, value in dict(sch.members).items():
            if not isinstance(value, bool):
                raise ScenarioError(f"membership of {text!r} must be true or false", "members")
            members.append((text, _literal(text, "members", ph, n, order), value))
        _check_int(sch.random_pairs, "random_pairs", 0, 10_000)
        _check_int(sch.pair_degree, "pair_degree", 0, MAX_DEGREE)
        props = self.properties
        _check_int(props.sample_degree, "sample_degree", 0, MAX_DEGREE)
        _check_int(props.random_samples, "random_samples", 0, 10_000)
        _check_int(props.quadratic_vectors, "quadratic_vectors", 0, 100_000)
        cap = self.deform.get_cap()

        return Scenario(
            self, tag, chart, n, degree, order, seed, checks, expect, functional,
            generator, observables, obs_degree, operators, applies, members, cap,
        )

    def _resolve_chart(self, tag: GeneratorTag) -> Chart:
        given = _check_choice(self.chart, "chart", [""] + [c.value for c in Chart])
        if tag in PRODUCT_INFOS and tag != GeneratorTag.pointwise:
            native = PRODUCT_INFOS[tag].chart
            if given and Chart(given) != native:
                raise ScenarioError(f"the {tag.value} product lives on the {native.value} chart, not {given}", "chart")
            return native
        return Chart(given) if given else Chart.complex


@dataclass
class Scenario:
    """Validated scenario with its algebraic objects"""

    setup: ScenarioSetup
    tag: GeneratorTag
    chart: Chart
    n: int
    degree: int
    order: int
    seed: int
    checks: list
    expect: dict
    functional: Functional
    generator: BidiffGenerator
    observables: list
    observable_degree: int
    schrodinger_operators: list = field(default_factory=list)
    schrodinger_apply: list = field(default_factory=list)
    schrodinger_members: list = field(default_factory=list)
    deform_cap: Fraction = DEFORM_CAP
    path: str = ""

    @property
    def name(self) -> str:
        return self.setup.name


# ===============================================================================
#     Loading
# ===============================================================================

_TOML_POS = re.compile(r"at line (\d+)")


def locate_key(text: str, key: str) -> Union[int, None]:
    """1-based line of the first assignment or table header of `key`"""
    if not key:
        return None
    pattern = re.compile(rf"^\s*(\[\s*)?[\"']?{re.escape(key)}[\"']?\s*(=|\])|[{{,]\s*{re.escape(key)}\s*=")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if pattern.search(line):
            return lineno
    return None


def _positioned(path: str, line: Union[int, None], message: str) -> str:
    return f"{path}:{line}: {message}" if line else f"{path}: {message}"


def load_setup(path: str, overrides: dict = None) -> tuple[ScenarioSetup, str]:
    """Read a scenario file into a ScenarioSetup, CLI overrides applied last

    Raises:
        ScenarioError: unreadable file, TOML syntax errors or unknown keys,
        prefixed by path:line
    """
    try:
        with open(path, "rb") as f:
            text = f.read().decode("utf-8")
    except OSError as e:
        raise ScenarioError(f"{path}: cannot read scenario: {e.strerror}") from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        m = _TOML_POS.search(str(e))
        raise ScenarioError(_positioned(path, int(m.group(1)) if m else None, str(e))) from e
    setup = ScenarioSetup()
    if "name" not in data:
        data["name"] = os.path.splitext(os.path.basename(path))[0]
    try:
        setup.set_from_dict(**data)
        setup.set_from_dict(**{k: v for k, v in (overrides or {}).items() if v is not None})
    except ScenarioError as e:
        raise ScenarioError(_positioned(path, locate_key(text, e.key), str(e)), e.key) from e
    return setup, text


def load_scenario(path: str, overrides: dict = None) -> Scenario:
    """Read and validate a scenario file

    Raises:
        ScenarioError: parse or validation error prefixed by path:line
    """
    setup, text = load_setup(path, overrides)
    try:
        scenario = setup.resolve()
    except ScenarioError as e:
        line = None if e.key in (overrides or {}) else locate_key(text, e.key)
        logger.error(f"SETUP: {path}: {e}")
        raise ScenarioError(_positioned(path, line, str(e)), e.key) from e
    scenario.path = path
    logger.info(f"SETUP: loaded scenario {scenario.name!r} from {path}")
    return scenario
