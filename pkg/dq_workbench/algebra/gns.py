"""GNS construction on the degree filtration and its classical limit.

The GNS space at level l is the span of the monomials of degree <= l modulo
the kernel of the Gram form. Classes are represented by the complement of
the kernel pivots (canonical echelon complement), so every vector is a
coordinate list over those monomials. Observables map level l to level
l + deg f.
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import sympy

from dq_workbench.algebra import linalg
from dq_workbench.algebra.constants import (
    DEFAULT_OBSERVABLE_DEGREE,
    SERIES_SYMBOL,
    Chart,
    VarKind,
)
from dq_workbench.algebra.functional import (
    ClassicalPart,
    Functional,
    GramForm,
    eval_functional,
    gram_matrix,
)
from dq_workbench.algebra.poly import (
    Poly,
    VarSort,
    chart_variables,
    lift,
    monomial_basis,
    series_degree,
)
from dq_workbench.algebra.psd import (
    KernelBasis,
    PsdVerdict,
    echelon_reduce,
    kernel_extract,
    mat_vec,
    psd_decide,
)
from dq_workbench.algebra.scalar import ONE, Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.star import BidiffGenerator, PolyLike, star_multiply

logger = logging.getLogger(__name__)


class GnsError(Exception):
    """"""


Vector = list


def claim(d: int, order: int) -> str:
    return f"up to degree {d} and order {order}"


# ===============================================================================
#     Presentations
# ===============================================================================


@dataclass
class RepOperator:
    """Matrix of pi(f) from the classes of level `source` to level `target`"""

    observable: str
    source: int
    target: int
    source_labels: list
    labels: list
    matrix: np.ndarray
    target_gram: np.ndarray


@dataclass
class RepPresentation:
    """Finite presentation of a pre-Hilbert module with a cyclic vector and
    observables acting between filtration levels"""

    labels: list
    gram: np.ndarray
    cyclic: list
    operators: dict = field(default_factory=dict)
    order: int = 0
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def zero(cls, order: int = 0, metadata: dict = None) -> "RepPresentation":
        return cls([], linalg.zeros(0, 0, order), [], {}, order, dict(metadata or {}))


@dataclass
class GnsLevel:
    """Gram form, verdict, kernel and quotient complement at one level"""

    level: int
    gram: GramForm
    verdict: PsdVerdict
    kernel: KernelBasis
    complement: list

    @property
    def labels(self) -> list[str]:
        return [str(self.gram.basis[s]) for s in self.complement]

    def compressed(self) -> np.ndarray:
        idx = self.complement
        if not idx:
            return linalg.zeros(0, 0, self.gram.order)
        return self.gram.entries[np.ix_(idx, idx)]


def default_observables(chart: Chart, n: int) -> list[Poly]:
    """The coordinate functions of the chart"""
    return [Poly.variable(chart, n, v) for v in chart_variables(chart, n)]


def to_series_poly(vec: Sequence[TruncatedSeries], basis: Sequence[Poly], order: int) -> TruncatedSeries:
    """sum_k vec_k e_k as a series of polynomials"""
    chart, n = basis[0].chart, basis[0].n
    acc = TruncatedSeries.zeros(order, Poly.zero(chart, n))
    for x, e in zip(vec, basis):
        if x:
            acc = acc + x * e
    return acc


class GnsBuilder:
    """Per-level cache of the GNS data of (omega, product)

    Args:
        omega (Functional): the state
        gen (BidiffGenerator): the product
        order (int, optional): truncation order, the functional's by default
        observable_degree (int): largest degree accepted by `operator`
    """

    def __init__(
        self,
        omega: Functional,
        gen: BidiffGenerator,
        order: int = None,
        observable_degree: int = DEFAULT_OBSERVABLE_DEGREE,
    ) -> None:
        if order is not None and order != omega.order:
            omega = omega.with_order(order)
        if omega.chart != gen.chart or omega.n != gen.n:
            raise GnsError(
                f"functional on the {omega.chart.value} chart and product on the "
                f"{gen.chart.value} chart"
            )
        self.omega = omega
        self.gen = gen
        self.order = omega.order
        self.observable_degree = observable_degree
        self._levels: dict[int, GnsLevel] = {}

    @property
    def chart(self) -> Chart:
        return self.gen.chart

    @property
    def n(self) -> int:
        return self.gen.n

    def level(self, ell: int) -> GnsLevel:
        """GNS data at filtration level ell

        Raises:
            GnsError: the gram form is indefinite (the witness is named)
        """
        if ell not in self._levels:
            gram = gram_matrix(self.omega, self.gen, ell)
            verdict = psd_decide(gram)
            if not verdict.is_psd:
                witness = [str(x) for x in verdict.witness]
                raise GnsError(
                    f"gram form of {self.omega.label()} at degree {ell} is indefinite: "
                    f"witness {witness} with value {verdict.value}"
                )
            kernel = kernel_extract(gram, verdict)
            complement = [k for k in range(gram.size) if k not in kernel.pivots]
            self._levels[ell] = GnsLevel(ell, gram, verdict, kernel, complement)
            logger.debug(
                f"GNS: level {ell}: {gram.size} monomials, kernel {kernel.dim}, quotient {len(complement)}"
            )
        return self._levels[ell]

    # ---------------------------------------------------------------------------
    # Coordinates
    # ---------------------------------------------------------------------------

    def vector(self, f: PolyLike, ell: int) -> Vector:
        """Coordinates of f over the monomials of level ell"""
        basis = self.level(ell).gram.basis
        index = {next(iter(b.terms)): k for k, b in enumerate(basis)}
        fs = lift(f, self.order)
        coeffs = [[Scalar()] * (self.order + 1) for _ in basis]
        for a, fa in enumerate(fs.coeffs):
            for e, c in fa.terms.items():
                if e not in index:
                    raise GnsError(f"{fa.monomial_label(e)} lies above the filtration level {ell}")
                coeffs[index[e]][a] = c
        return [TruncatedSeries(self.order, tuple(c)) for c in coeffs]

    def reduce(self, x: Vector, ell: int) -> Vector:
        """Class of a level-ell coordinate vector on the quotient complement"""
        lvl = self.level(ell)
        y = list(x)
        for vec, p in zip(lvl.kernel.vectors, lvl.kernel.pivots):
            c = y[p]
            if c:
                y = [a - c * b for a, b in zip(y, vec)]
        return [y[s] for s in lvl.complement]

    def class_of(self, f: PolyLike, ell: int) -> Vector:
        return self.reduce(self.vector(f, ell), ell)

    def cyclic(self, ell: int) -> Vector:
        return self.class_of(Poly.constant(self.chart, self.n, ONE), ell)

    def inner(self, x: Vector, y: Vector, ell: int) -> TruncatedSeries:
        g = self.level(ell).compressed()
        if not len(x):
            return TruncatedSeries.zeros(self.order)
        return linalg.conj_vector(x).dot(g.dot(linalg.column(y)))

    def representatives(self, ell: int) -> list[Poly]:
        lvl = self.level(ell)
        return [lvl.gram.basis[s] for s in lvl.complement]

    # ---------------------------------------------------------------------------
    # Operators
    # ---------------------------------------------------------------------------

    def operator(
        self, f: PolyLike, source: int, target: int = None, check_bound: bool = True
    ) -> RepOperator:
        """pi(f) from level `source` to level `target` (source + deg f by
        default)

        Raises:
            GnsError: observable degree above the configured bound, or a
            target level below source + deg f
        """
        fs = lift(f, self.order)
        deg = series_degree(fs)
        if check_bound and deg > self.observable_degree:
            raise GnsError(
                f"observable {fs} of degree {deg} exceeds the observable degree bound "
                f"{self.observable_degree}"
            )
        target = source + deg if target is None else target
        if target < source + deg:
            raise GnsError(
                f"observable {fs} maps level {source} beyond the requested level {target}"
            )
        columns = [
            self.class_of(star_multiply(fs, e, self.gen, self.order), target)
            for e in self.representatives(source)
        ]
        tgt = self.level(target)
        matrix = linalg.from_columns(columns, len(tgt.complement), self.order)
        return RepOperator(
            str(fs),
            source,
            target,
            self.level(source).labels,
            tgt.labels,
            matrix,
            tgt.compressed(),
        )

    def presentation(self, d: int, observables: Sequence[PolyLike] = ()) -> RepPresentation:
        """Presentation of the level-d quotient with the given observables

        Raises:
            GnsError: indefinite form, degenerate quotient, degree overflow
            or a failing state identity
        """
        lvl = self.level(d)
        compressed = lvl.compressed()
        if psd_decide(compressed).decomposition.null_indices:
            raise GnsError(f"internal: quotient gram at level {d} is degenerate")
        defects = self.state_identity_defects(d)
        if defects:
            raise GnsError(f"state identity fails on {defects}")
        operators = {}
        for f in observables:
            op = self.operator(f, d)
            operators[op.observable] = op
        metadata = {
            "functional": self.omega.label(),
            "generator": self.gen.tag.value,
            "chart": self.chart.value,
            "n": self.n,
            "degree": d,
            "order": self.order,
        }
        return RepPresentation(
            lvl.labels, compressed, self.cyclic(d), operators, self.order, metadata
        )

    # ---------------------------------------------------------------------------
    # Consistency residuals
    # ---------------------------------------------------------------------------

    def state_identity_defects(self, d: int) -> list[str]:
        """Monomials f of degree <= d with <psi_1, pi(f) psi_1> != omega(f)"""
        defects = []
        for m in monomial_basis(self.chart, self.n, d):
            ell = m.degree()
            lhs = self.inner(self.cyclic(ell), self.class_of(m, ell), ell)
            if lhs != eval_functional(self.omega, m):
                defects.append(str(m))
        return defects

    def composition_residual(self, f: PolyLike, g: PolyLike, source: int) -> np.ndarray:
        """pi(f * g) - pi(f) pi(g) from `source` to source + deg f + deg g"""
        fs, gs = lift(f, self.order), lift(g, self.order)
        mid = source + series_degree(gs)
        target = mid + series_degree(fs)
        a = self.operator(gs, source, mid, check_bound=False).matrix
        b = self.operator(fs, mid, target, check_bound=False).matrix
        fg = star_multiply(fs, gs, self.gen, self.order)
        c = self.operator(fg, source, target, check_bound=False).matrix
        return linalg.mat_sub(c, linalg.mat_mul(b, a, self.order))

    def star_residual(self, f: PolyLike, source: int) -> np.ndarray:
        """<pi(f) phi, psi> - <phi, pi(f*) psi> over level-`source` classes"""
        fs = lift(f, self.order)
        target = source + series_degree(fs)
        m = self.operator(fs, source, target, check_bound=False).matrix
        m_star = self.operator(fs.star(), source, target, check_bound=False).matrix
        incl = linalg.from_columns(
            [self.class_of(e, target) for e in self.representatives(source)],
            len(self.level(target).complement),
            self.order,
        )
        g = self.level(target).compressed()
        lhs = linalg.mat_mul(linalg.mat_mul(linalg.adjoint(m), g, self.order), incl, self.order)
        rhs = linalg.mat_mul(linalg.mat_mul(linalg.adjoint(incl), g, self.order), m_star, self.order)
        return linalg.mat_sub(lhs, rhs)


def gns_build(
    omega: Functional,
    gen: BidiffGenerator,
    d: int,
    order: int = None,
    observables: Sequence[PolyLike] = (),
    observable_degree: int = DEFAULT_OBSERVABLE_DEGREE,
) -> RepPresentation:
    return GnsBuilder(omega, gen, order, observable_degree).presentation(d, observables)


def gelfand_ideal_basis(
    omega: Functional,
    gen: BidiffGenerator,
    d: int,
    order: int = None,
    spot_check: bool = True,
    builder: GnsBuilder = None,
) -> list[TruncatedSeries]:
    """Kernel of the degree-d gram form as polynomial combinations

    Raises:
        GnsError: indefinite gram (with witness) or a failing left-ideal spot
        check omega((a * j)* * (a * j)) = 0 for coordinate functions a
    """
    builder = builder or GnsBuilder(omega, gen, order)
    lvl = builder.level(d)
    ideal = [to_series_poly(v, lvl.gram.basis, builder.order) for v in lvl.kernel.vectors]
    if spot_check:
        for j in ideal:
            for a in default_observables(builder.chart, builder.n):
                x = star_multiply(a, j, builder.gen, builder.order)
                value = eval_functional(builder.omega, star_multiply(x.star(), x, builder.gen, builder.order))
                if value:
                    raise GnsError(f"left ideal spot check fails: omega(x* x) = {value} for x = {a} * ({j})")
    return ideal


# ===============================================================================
#     Classical limit
# ===============================================================================


@dataclass
class NullSplit:
    """H_0 of a gram form: null basis at order 0 and the complement coordinates"""

    h0: list
    complement: list
    projection: np.ndarray
    section: np.ndarray
    gram: np.ndarray


def split_null(gram: np.ndarray) -> NullSplit:
    """Kernel of the l^0 part of a psd gram form with projection and section"""
    g0 = linalg.with_order(gram, 0)
    m = g0.shape[0]
    verdict = psd_decide(g0)
    if not verdict.is_psd:
        raise GnsError(f"classical part of the form is indefinite, value {verdict.value}")
    kernel = kernel_extract(g0, verdict)
    comp = [k for k in range(m) if k not in kernel.pivots]
    columns = []
    for j in range(m):
        y = [TruncatedSeries.constant(ONE if i == j else Scalar(), 0) for i in range(m)]
        for vec, p in zip(kernel.vectors, kernel.pivots):
            c = y[p]
            if c:
                y = [a - c * b for a, b in zip(y, vec)]
        columns.append([y[c] for c in comp])
    projection = linalg.from_columns(columns, len(comp), 0)
    section = linalg.zeros(m, len(comp), 0)
    for col, k in enumerate(comp):
        section[k, col] = TruncatedSeries.constant(ONE, 0)
    cgram = g0[np.ix_(comp, comp)] if comp else linalg.zeros(0, 0, 0)
    return NullSplit(kernel.vectors, comp, projection, section, cgram)


@dataclass
class ClassicalLimitResult:
    projection: np.ndarray
    section: np.ndarray
    presentation: RepPresentation
    h0_basis: list
    h0_labels: list
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def classical_limit(p: RepPresentation) -> ClassicalLimitResult:
    """Quotient by H_0 = {phi : <phi, phi> = 0 at l = 0}; H_0 is the span of
    `h0_basis` plus l times the whole module"""
    split = split_null(p.gram)
    proj, sec = split.projection, split.section
    g0 = linalg.with_order(p.gram, 0)
    checks = {}
    lhs = linalg.mat_mul(linalg.mat_mul(linalg.adjoint(proj), split.gram, 0), proj, 0)
    checks["inner-product"] = linalg.is_zero(linalg.mat_sub(lhs, g0))
    checks["identity"] = linalg.is_zero(
        linalg.mat_sub(linalg.mat_mul(proj, sec, 0), linalg.identity(len(split.complement), 0))
    )
    cyclic = linalg.apply(proj, [x.with_order(0) for x in p.cyclic], 0)

    operators = {}
    invariant = True
    for name, op in p.operators.items():
        split_t = split_null(op.target_gram)
        m0 = linalg.with_order(op.matrix, 0)
        matrix = linalg.mat_mul(linalg.mat_mul(split_t.projection, m0, 0), sec, 0)
        for h in split.h0:
            if any(linalg.apply(split_t.projection, linalg.apply(m0, h, 0), 0)):
                invariant = False
        operators[name] = RepOperator(
            name,
            op.source,
            op.target,
            [p.labels[c] for c in split.complement],
            [op.labels[c] for c in split_t.complement],
            matrix,
            split_t.gram,
        )
    checks["h0-invariant"] = invariant

    metadata = dict(p.metadata)
    metadata["classical-limit"] = True
    presentation = RepPresentation(
        [p.labels[c] for c in split.complement], split.gram, cyclic, operators, 0, metadata
    )
    h0_labels = [p.labels[pv] for pv in _pivots(split.h0)]
    if not all(checks.values()):
        logger.warning(f"CLIMIT: functor checks failed: {checks}")
    return ClassicalLimitResult(proj, sec, presentation, split.h0, h0_labels, checks)


def _pivots(vectors: list) -> list[int]:
    return [next(k for k, x in enumerate(v) if x.is_unit()) for v in vectors]


def lambda_extension(g0: Sequence[Sequence], order: int, labels: Sequence[str] = None) -> RepPresentation:
    """C^m (x) C[[l]] with the constant extension of a positive definite
    scalar pairing; its classical limit is the original space since
    H_0 = l H"""
    gram = linalg.from_scalars(g0, order)
    m = gram.shape[0]
    labels = list(labels) if labels is not None else [f"e{k + 1}" for k in range(m)]
    cyclic = [TruncatedSeries.constant(ONE if k == 0 else Scalar(), order) for k in range(m)]
    return RepPresentation(labels, gram, cyclic, {}, order, {"model": "lambda-extension"})


# ===============================================================================
#     Orthogonal sums
# ===============================================================================


def orthogonal_sum(ps: Sequence[RepPresentation]) -> RepPresentation:
    """Block diagonal sum, labels prefixed by the summand index

    Raises:
        GnsError: empty list or mismatched orders or charts
    """
    if not ps:
        raise GnsError("orthogonal sum of an empty family")
    order = ps[0].order
    for p in ps:
        if p.order != order:
            raise GnsError(f"orthogonal sum of presentations of orders {order} and {p.order}")
        for key in ("chart", "n"):
            if key in p.metadata and key in ps[0].metadata and p.metadata[key] != ps[0].metadata[key]:
                raise GnsError(f"orthogonal sum with mismatched {key}: {ps[0].metadata[key]} vs {p.metadata[key]}")
    nonzero = [p for p in ps if p.dim]
    keys = [k for k in (nonzero[0].operators if nonzero else {}) if all(k in p.operators for p in nonzero)]
    labels = [f"{i}:{l}" for i, p in enumerate(ps) for l in p.labels]
    gram = linalg.block_diag([p.gram for p in ps], order)
    cyclic = [x for p in ps for x in p.cyclic]
    operators = {}
    for key in keys:
        ops = [p.operators.get(key) for p in ps]
        ref = next(o for o in ops if o is not None)
        if any(o is not None and (o.source, o.target) != (ref.source, ref.target) for o in ops):
            continue
        blocks = [o.matrix if o is not None else linalg.zeros(0, 0, order) for o in ops]
        grams = [o.target_gram if o is not None else linalg.zeros(0, 0, order) for o in ops]
        operators[key] = RepOperator(
            key,
            ref.source,
            ref.target,
            [f"{i}:{l}" for i, o in enumerate(ops) if o is not None for l in o.source_labels],
            [f"{i}:{l}" for i, o in enumerate(ops) if o is not None for l in o.labels],
            linalg.block_diag(blocks, order),
            linalg.block_diag(grams, order),
        )
    metadata = dict(ps[0].metadata)
    metadata["summands"] = len(ps)
    return RepPresentation(labels, gram, cyclic, operators, order, metadata)


def same_presentation(a: RepPresentation, b: RepPresentation) -> bool:
    """Exact comparison of labels, gram, cyclic vector and operators"""
    if a.labels != b.labels or a.gram.shape != b.gram.shape:
        return False
    if not linalg.is_zero(linalg.mat_sub(a.gram, b.gram)) or a.cyclic != b.cyclic:
        return False
    if set(a.operators) != set(b.operators):
        return False
    for key, op in a.operators.items():
        other = b.operators[key]
        if op.labels != other.labels or op.matrix.shape != other.matrix.shape:
            return False
        if not linalg.is_zero(linalg.mat_sub(op.matrix, other.matrix)):
            return False
    return True


def sum_commutes_with_classical_limit(ps: Sequence[RepPresentation]) -> bool:
    """c(p_1 + ... + p_k) == c(p_1) + ... + c(p_k), exactly"""
    left = classical_limit(orthogonal_sum(ps)).presentation
    right = orthogonal_sum([classical_limit(p).presentation for p in ps])
    return same_presentation(left, right)


# ===============================================================================
#     Main theorem instance
# ===============================================================================


@dataclass
class TheoremReport:
    """Exact residuals of the intertwiner between the classical limit of the
    deformed GNS representation and the classical GNS representation"""

    passed: bool
    claim: str
    dims: dict = field(default_factory=dict)
    well_defined: dict = field(default_factory=dict)
    unitarity: dict = field(default_factory=dict)
    intertwining: dict = field(default_factory=dict)
    intertwiners: dict = field(default_factory=dict)


def _order0_part(f: PolyLike, order: int) -> Poly:
    return lift(f, order).coeffs[0]


def verify_main_theorem(
    omega: Functional,
    gen: BidiffGenerator,
    d: int,
    order: int = None,
    observables: Sequence[PolyLike] = None,
    observable_degree: int = DEFAULT_OBSERVABLE_DEGREE,
) -> TheoremReport:
    """Build U: c(psi_A) -> psi_A0 level by level and check it is well
    defined on H_0, unitary and intertwining for the observables

    Raises:
        GnsError: the deformed or the classical gram form is indefinite
    """
    deformed = GnsBuilder(omega, gen, order, observable_degree)
    classical = GnsBuilder(
        ClassicalPart.of(deformed.omega),
        BidiffGenerator.pointwise(gen.chart, gen.n),
        0,
        observable_degree,
    )
    observables = default_observables(gen.chart, gen.n) if observables is None else list(observables)
    pres = deformed.presentation(d, observables)
    limit = classical_limit(pres)

    report = TheoremReport(True, claim(d, deformed.order))
    levels = sorted({d} | {op.target for op in pres.operators.values()})
    unitaries = {}
    for ell in levels:
        lvl = deformed.level(ell)
        split = split_null(lvl.compressed())
        w = linalg.from_columns(
            [classical.class_of(e, ell) for e in deformed.representatives(ell)],
            len(classical.level(ell).complement),
            0,
        )
        wd = [linalg.apply(w, h, 0) for h in split.h0]
        u = linalg.mat_mul(w, split.section, 0)
        g_cl = classical.level(ell).compressed()
        unit = linalg.mat_sub(
            linalg.mat_mul(linalg.mat_mul(linalg.adjoint(u), g_cl, 0), u, 0), split.gram
        )
        square = u.shape[0] == u.shape[1]
        report.dims[ell] = {"classical-limit": len(split.complement), "classical": u.shape[0]}
        report.well_defined[ell] = wd
        report.unitarity[ell] = unit
        report.intertwiners[ell] = u
        unitaries[ell] = u
        ok = square and all(not any(v) for v in wd) and linalg.is_zero(unit)
        report.passed = report.passed and ok

    for f in observables:
        fs = lift(f, deformed.order)
        name = str(fs)
        op_c = limit.presentation.operators[name]
        f0 = _order0_part(fs, deformed.order)
        cl_op = classical.operator(f0, d, op_c.target, check_bound=False).matrix
        lhs = linalg.mat_mul(unitaries[op_c.target], op_c.matrix, 0)
        rhs = linalg.mat_mul(cl_op, unitaries[d], 0)
        residual = linalg.mat_sub(lhs, rhs)
        report.intertwining[name] = residual
        report.passed = report.passed and linalg.is_zero(residual)

    if not report.passed:
        logger.warning(f"THEOREM: residuals do not vanish ({report.claim})")
    return report


# ===============================================================================
#     No-go certificate and ideal reduction
# ===============================================================================


@dataclass
class NoGoReport:
    target: str
    order: int
    contradiction_order: Union[int, None]
    equations: list = field(default_factory=list)
    model: str = "rank-1"

    @property
    def consistent(self) -> bool:
        return self.contradiction_order is None


def no_go_certificate(
    target: TruncatedSeries = None, order: int = 2, builder: GnsBuilder = None
) -> NoGoReport:
    """Test pi(z) pi(zb) - pi(zb) pi(z) = target * id

    Without a builder the representation is the rank-1 free module with
    unknown series pi(z) = sum a_r l^r, pi(zb) = sum b_r l^r (r >= 1); the
    commutator of two scalars vanishes identically, so the first order at
    which the target has a nonzero coefficient is a contradiction. With a
    builder the commutator is evaluated on psi_1 of that presentation.
    """
    target = TruncatedSeries.lam(order, 1, Scalar(2)) if target is None else target
    if builder is not None:
        return _no_go_on_builder(target, builder)
    lam = sympy.Symbol(SERIES_SYMBOL)
    a = sympy.symbols(f"a1:{order + 1}")
    b = sympy.symbols(f"b1:{order + 1}")
    pz = sum((a[r - 1] * lam**r for r in range(1, order + 1)), sympy.Integer(0))
    pzb = sum((b[r - 1] * lam**r for r in range(1, order + 1)), sympy.Integer(0))
    comm = sympy.expand(pz * pzb - pzb * pz)
    equations, contradiction = [], None
    for r in range(order + 1):
        t = target[r]
        rhs = sympy.Rational(t.re.numerator, t.re.denominator) + sympy.I * sympy.Rational(
            t.im.numerator, t.im.denominator
        )
        lhs = comm.coeff(lam, r)
        eq = sympy.expand(lhs - rhs)
        equations.append(f"l^{r}: {lhs} = {rhs}")
        if contradiction is None and not eq.free_symbols and eq != 0:
            contradiction = r
    logger.info(f"NOGO: rank-1 contradiction order {contradiction}")
    return NoGoReport(str(target), order, contradiction, equations)


def _no_go_on_builder(target: TruncatedSeries, builder: GnsBuilder) -> NoGoReport:
    if builder.chart != Chart.complex:
        raise GnsError("the commutator test needs the complex chart")
    n, order = builder.n, builder.order
    z = Poly.variable(Chart.complex, n, VarSort(VarKind.z, 1))
    zb = Poly.variable(Chart.complex, n, VarSort(VarKind.zb, 1))
    psi = builder.cyclic(0)

    def pi(f: Poly, x: Vector, source: int) -> Vector:
        return linalg.apply(builder.operator(f, source, source + 1).matrix, x, order)

    comm = [
        u - v for u, v in zip(pi(z, pi(zb, psi, 0), 1), pi(zb, pi(z, psi, 0), 1))
    ]
    expected = [target * x for x in builder.cyclic(2)]
    residual = [u - v for u, v in zip(comm, expected)]
    vals = [x.valuation() for x in residual if x]
    contradiction = min(vals) if vals else None
    equations = [f"[pi(z), pi(zb)] psi_1 = {[str(x) for x in comm]}"]
    return NoGoReport(str(target), order, contradiction, equations, "gns")


@dataclass
class IdealReductionReport:
    quantum_dim: int
    reduced_dim: int
    classical_dim: int
    quantum_ideal: list
    classical_ideal: list
    contained: bool
    claim: str

    @property
    def proper(self) -> bool:
        return self.contained and self.reduced_dim < self.classical_dim


def ideal_reduction_report(
    omega: Functional, gen: BidiffGenerator, d: int, order: int = None
) -> IdealReductionReport:
    """Compare the l^0 reduction of the quantum kernel with the classical
    kernel at degree d"""
    quantum = GnsBuilder(omega, gen, order)
    classical = GnsBuilder(
        ClassicalPart.of(quantum.omega), BidiffGenerator.pointwise(gen.chart, gen.n), 0
    )
    qlvl, clvl = quantum.level(d), classical.level(d)
    reduced = [[x.with_order(0) for x in v] for v in qlvl.kernel.vectors]
    rank = len(echelon_reduce(reduced, skip_dependent=True)[0]) if reduced else 0
    contained = all(not any(mat_vec(clvl.gram.entries, v)) for v in reduced)
    basis = qlvl.gram.basis
    return IdealReductionReport(
        qlvl.kernel.dim,
        rank,
        clvl.kernel.dim,
        [str(to_series_poly(v, basis, quantum.order)) for v in qlvl.kernel.vectors],
        [str(to_series_poly(v, basis, 0)) for v in clvl.kernel.vectors],
        contained,
        claim(d, quantum.order),
    )
