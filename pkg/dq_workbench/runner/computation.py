import itertools
import logging
import time
from typing import Callable

from dq_workbench.algebra import linalg
from dq_workbench.algebra.constants import Chart, CheckName
from dq_workbench.algebra.deform import deform_functional
from dq_workbench.algebra.functional import (
    FunctionalError,
    GramError,
    GramForm,
    eval_functional,
    gram_matrix,
    hermitian_defect,
)
from dq_workbench.algebra.gns import (
    GnsBuilder,
    GnsError,
    RepPresentation,
    claim,
    classical_limit,
    gelfand_ideal_basis,
    ideal_reduction_report,
    no_go_certificate,
    sum_commutes_with_classical_limit,
    to_series_poly,
    verify_main_theorem,
)
from dq_workbench.algebra.literals import LiteralError, format_matrix, format_vector
from dq_workbench.algebra.poly import Poly, PolyError, chart_variables
from dq_workbench.algebra.psd import (
    PsdError,
    PsdVerdict,
    cauchy_schwarz_holds,
    kernel_extract,
    mat_vec,
    psd_decide,
    quadratic_form,
)
from dq_workbench.algebra.sampling import random_poly, random_vector, spawn
from dq_workbench.algebra.scalar import ScalarError
from dq_workbench.algebra.schrodinger import (
    SchrodingerError,
    schrodinger_apply,
    schrodinger_operator,
    weyl_gelfand_member,
)
from dq_workbench.algebra.series import SeriesError, TruncatedSeries
from dq_workbench.algebra.star import (
    BidiffGenerator,
    SmoothingError,
    StarProductError,
    assoc_check,
    commutator,
    default_pair_samples,
    default_triple_samples,
    hermitian_check,
    star_multiply,
)
from dq_workbench.runner.report import CheckResult, Report
from dq_workbench.runner.setup import Scenario

logger = logging.getLogger(__name__)

# domain errors raised inside a check are reported in the check body
CHECK_ERRORS = (
    ScalarError,
    SeriesError,
    LiteralError,
    PolyError,
    StarProductError,
    SmoothingError,
    FunctionalError,
    GramError,
    PsdError,
    GnsError,
    SchrodingerError,
)


def _all_zero(matrices) -> bool:
    return all(linalg.is_zero(m) for m in matrices)


class ScenarioRunner:
    """Run the checks of a scenario in declared order and collect a Report

    The gram form, its verdict, the GNS builder and the presentation are
    computed once and shared by the checks that need them.
    """

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.claim = claim(scenario.degree, scenario.order)
        self._gram: GramForm = None
        self._verdict: PsdVerdict = None
        self._builder: GnsBuilder = None
        self._presentation: RepPresentation = None
        self._rngs = dict(zip(CheckName, spawn(scenario.seed, len(CheckName))))
        self.callbacks: dict[CheckName, Callable[[], CheckResult]] = {
            CheckName.gram: self.check_gram,
            CheckName.psd: self.check_psd,
            CheckName.kernel: self.check_kernel,
            CheckName.gns: self.check_gns,
            CheckName.classical_limit: self.check_classical_limit,
            CheckName.theorem: self.check_theorem,
            CheckName.no_go: self.check_no_go,
            CheckName.ideal_reduction: self.check_ideal_reduction,
            CheckName.schrodinger_op: self.check_schrodinger_op,
            CheckName.schrodinger_apply: self.check_schrodinger_apply,
            CheckName.schrodinger_member: self.check_schrodinger_member,
            CheckName.assoc: self.check_assoc,
            CheckName.hermitian: self.check_hermitian,
            CheckName.deform: self.check_deform,
        }

    def run(self) -> Report:
        sc = self.scenario
        report = Report(sc.setup.to_dict(), sc.seed)
        for check in sc.checks:
            logger.info(f"RUNNER: {sc.name}: {check.value} ({self.claim})")
            start = time.perf_counter()
            try:
                result = self.callbacks[check]()
            except CHECK_ERRORS as e:
                result = CheckResult(check.value, False, self.claim, error=f"{type(e).__name__}: {e}")
            result.expected = sc.expect.get(check, True)
            result.seconds = time.perf_counter() - start
            if not result.passed:
                logger.warning(f"RUNNER: {sc.name}: {check.value} failed {result.error}")
            report.checks.append(result)
        logger.info(f"RUNNER: {sc.name}: {'all checks pass' if report.passed else 'failures'}")
        return report

    # ---------------------------------------------------------------------------
    # Shared objects
    # ---------------------------------------------------------------------------

    @property
    def gram(self) -> GramForm:
        if self._gram is None:
            sc = self.scenario
            self._gram = gram_matrix(sc.functional, sc.generator, sc.degree, sc.order)
        return self._gram

    @property
    def verdict(self) -> PsdVerdict:
        if self._verdict is None:
            self._verdict = psd_decide(self.gram)
        return self._verdict

    @property
    def builder(self) -> GnsBuilder:
        if self._builder is None:
            sc = self.scenario
            self._builder = GnsBuilder(sc.functional, sc.generator, sc.order, sc.observable_degree)
        return self._builder

    @property
    def presentation(self) -> RepPresentation:
        if self._presentation is None:
            self._presentation = self.builder.presentation(self.scenario.degree, self.scenario.observables)
        return self._presentation

    def _result(self, check: CheckName, holds: bool, body: dict) -> CheckResult:
        return CheckResult(check.value, holds, self.claim, body)

    # ---------------------------------------------------------------------------
    # Gram, psd and kernel
    # ---------------------------------------------------------------------------

    def check_gram(self) -> CheckResult:
        g = self.gram
        body = {
            "functional": g.functional,
            "generator": g.generator.value,
            "labels": g.labels,
            "matrix": format_matrix(g.entries),
            "hermitian": hermitian_defect(g.entries) is None,
        }
        return self._result(CheckName.gram, body["hermitian"], body)

    def check_psd(self) -> CheckResult:
        g, verdict = self.gram, self.verdict
        dec = verdict.decomposition
        body = {
            "status": verdict.label(),
            "pivots": [g.basis[k] for k in dec.pivots],
            "valuations": dec.valuations,
            "layers": {v: [g.basis[k] for k in idx] for v, idx in dec.layers().items()},
        }
        rng = self._rngs[CheckName.psd]
        count = self.scenario.setup.properties.quadratic_vectors
        if verdict.is_psd:
            violations = 0
            for _ in range(count):
                v = random_vector(rng, g.size, g.order)
                if quadratic_form(g.entries, v).sign() < 0:
                    violations += 1
            body["oracle"] = {"vectors": count, "violations": violations}
            body["cauchy_schwarz"] = cauchy_schwarz_holds(g.entries)
            holds = violations == 0 and body["cauchy_schwarz"]
        else:
            body["witness"] = format_vector(verdict.witness)
            body["value"] = verdict.value
            body["witness_certified"] = quadratic_form(g.entries, verdict.witness) == verdict.value
            holds = False
            if not body["witness_certified"]:
                return CheckResult(CheckName.psd.value, False, self.claim, body, error="witness does not reproduce its value")
        return self._result(CheckName.psd, holds, body)

    def check_kernel(self) -> CheckResult:
        g = self.gram
        kernel = kernel_extract(g, self.verdict)
        ideal = gelfand_ideal_basis(self.scenario.functional, self.scenario.generator, self.scenario.degree, builder=self.builder)
        lvl = self.builder.level(self.scenario.degree)
        body = {
            "dim": kernel.dim,
            "basis": [to_series_poly(v, g.basis, g.order) for v in kernel.vectors],
            "dimensions": kernel.dimensions,
            "stable_from": kernel.stable_from,
            "ideal": ideal,
            "quotient": lvl.labels,
            "annihilated": not any(any(mat_vec(g.entries, v)) for v in kernel.vectors),
            "ideal_null": all(not self._norm2(j) for j in ideal),
        }
        holds = (
            body["annihilated"]
            and body["ideal_null"]
            and kernel.dim == len(ideal)
            and kernel.dimensions[-1] == kernel.dim
            and len(lvl.labels) + kernel.dim == g.size
        )
        return self._result(CheckName.kernel, holds, body)

    def _norm2(self, f: TruncatedSeries) -> TruncatedSeries:
        """omega(f* * f)"""
        b = self.builder
        return eval_functional(b.omega, star_multiply(f.star(), f, b.gen, b.order))

    # ---------------------------------------------------------------------------
    # Representations
    # ---------------------------------------------------------------------------

    def check_gns(self) -> CheckResult:
        sc = self.scenario
        pres = self.presentation
        b = self.builder
        source = max(sc.degree - sc.observable_degree, 0)
        composition = [
            b.composition_residual(f, g, source)
            for f, g in itertools.product(sc.observables, repeat=2)
        ]
        star = [b.star_residual(f, sc.degree) for f in sc.observables]
        body = {
            "dim": pres.dim,
            "labels": pres.labels,
            "gram": format_matrix(pres.gram),
            "cyclic": format_vector(pres.cyclic),
            "inner_products": {label: pres.gram[k, k] for k, label in enumerate(pres.labels)},
            "operators": {
                name: {
                    "source": op.source,
                    "target": op.target,
                    "columns": op.source_labels,
                    "rows": op.labels,
                    "matrix": format_matrix(op.matrix),
                }
                for name, op in pres.operators.items()
            },
            "state_identity_defects": self._state_defects(),
            "composition_residuals_zero": _all_zero(composition),
            "star_residuals_zero": _all_zero(star),
        }
        holds = (
            not body["state_identity_defects"]
            and body["composition_residuals_zero"]
            and body["star_residuals_zero"]
        )
        return self._result(CheckName.gns, holds, body)

    def _state_defects(self) -> list[str]:
        """Monomials and observables f with <psi_1, pi(f) psi_1> != omega(f);
        observables act on the cyclic vector through their operator matrices"""
        sc, b = self.scenario, self.builder
        defects = b.state_identity_defects(sc.degree)
        for f in sc.observables:
            op = b.operator(f, 0, check_bound=False)
            image = linalg.apply(op.matrix, b.cyclic(0), sc.order)
            if b.inner(b.cyclic(op.target), image, op.target) != eval_functional(b.omega, f):
                defects.append(str(f))
        return defects

    def check_classical_limit(self) -> CheckResult:
        pres = self.presentation
        limit = classical_limit(pres)
        cp = limit.presentation
        sums = sum_commutes_with_classical_limit([pres, pres])
        body = {
            "dim": cp.dim,
            "labels": cp.labels,
            "h0": limit.h0_labels,
            "gram": format_matrix(cp.gram),
            "cyclic": format_vector(cp.cyclic),
            "operators": {name: format_matrix(op.matrix) for name, op in cp.operators.items()},
            "functor_checks": limit.checks,
            "orthogonal_sum_commutes": sums,
        }
        return self._result(CheckName.classical_limit, limit.passed and sums, body)

    def check_theorem(self) -> CheckResult:
        sc = self.scenario
        rep = verify_main_theorem(
            sc.functional, sc.generator, sc.degree, sc.order, sc.observables, sc.observable_degree
        )
        body = {
            "dims": rep.dims,
            "well_defined_zero": {ell: all(not any(v) for v in wd) for ell, wd in rep.well_defined.items()},
            "unitarity_zero": {ell: linalg.is_zero(u) for ell, u in rep.unitarity.items()},
            "intertwining_zero": {name: linalg.is_zero(r) for name, r in rep.intertwining.items()},
            "intertwiners": {ell: format_matrix(u) for ell, u in rep.intertwiners.items()},
        }
        return CheckResult(CheckName.theorem.value, rep.passed, rep.claim, body)

    def check_no_go(self) -> CheckResult:
        sc = self.scenario
        order = max(sc.order, 1)
        x, y = (Poly.variable(sc.chart, sc.n, v) for v in chart_variables(sc.chart, sc.n)[:: sc.n])
        target = commutator(x, y, sc.generator, order).map(lambda c: c.eval_origin())
        rank_one = no_go_certificate(target, order)
        body = {
            "commutator": f"[{x}, {y}]",
            "target": rank_one.target,
            "rank_one": {
                "contradiction_order": rank_one.contradiction_order,
                "equations": rank_one.equations,
            },
        }
        if sc.chart == Chart.complex and self.verdict.is_psd and sc.order >= 1:
            target_n = target.with_order(sc.order)
            gns = no_go_certificate(target_n, sc.order, builder=self.builder)
            body["gns"] = {"consistent": gns.consistent, "equations": gns.equations}
        return self._result(CheckName.no_go, rank_one.contradiction_order is not None, body)

    def check_ideal_reduction(self) -> CheckResult:
        sc = self.scenario
        rep = ideal_reduction_report(sc.functional, sc.generator, sc.degree, sc.order)
        body = {
            "quantum_dim": rep.quantum_dim,
            "reduced_dim": rep.reduced_dim,
            "classical_dim": rep.classical_dim,
            "quantum_ideal": rep.quantum_ideal,
            "classical_ideal": rep.classical_ideal,
            "contained": rep.contained,
            "proper": rep.proper,
        }
        return CheckResult(CheckName.ideal_reduction.value, rep.contained, rep.claim, body)

    # ---------------------------------------------------------------------------
    # Schroedinger representation
    # ---------------------------------------------------------------------------

    def check_schrodinger_op(self) -> CheckResult:
        sc = self.scenario
        order = sc.order
        ops = {text: schrodinger_operator(f, order) for text, f in sc.schrodinger_operators}
        symbols = [f for _, f in sc.schrodinger_operators]
        pairs = list(itertools.product(symbols, repeat=2))
        rng = self._rngs[CheckName.schrodinger_op]
        setup = sc.setup.schrodinger
        for _ in range(setup.random_pairs):
            f, g = (random_poly(rng, Chart.phase_space, sc.n, setup.pair_degree) for _ in range(2))
            pairs.append((f, g))
            symbols.extend((f, g))
        weyl = BidiffGenerator.weyl_moyal(sc.n)
        hom_fail, adj_fail = [], []
        for f, g in pairs:
            fg = star_multiply(f, g, weyl, order)
            if schrodinger_operator(fg, order) != schrodinger_operator(f, order) @ schrodinger_operator(g, order):
                hom_fail.append(f"({f}, {g})")
        for f in symbols:
            rho_f = schrodinger_operator(f, order)
            if schrodinger_operator(f.star(), order) != rho_f.adjoint():
                adj_fail.append(str(f))
        body = {
            "operators": {text: str(op) for text, op in ops.items()},
            "homomorphism": {"pairs": len(pairs), "failures": hom_fail},
            "adjoint": {"symbols": len(symbols), "failures": adj_fail},
        }
        return self._result(CheckName.schrodinger_op, not hom_fail and not adj_fail, body)

    def check_schrodinger_apply(self) -> CheckResult:
        """rho(f) psi from the product formula against the differential
        operator of f applied to psi"""
        order = self.scenario.order
        results, disagree = [], []
        for f, psi in self.scenario.schrodinger_apply:
            value = schrodinger_apply(f, psi, order)
            via_operator = schrodinger_operator(f, order).apply(psi)
            results.append({"f": f, "psi": psi, "value": value})
            if value != via_operator:
                disagree.append(f"({f}, {psi}): {value} vs {via_operator}")
        body = {"results": results, "operator_disagreements": disagree}
        return self._result(CheckName.schrodinger_apply, not disagree, body)

    def check_schrodinger_member(self) -> CheckResult:
        order = self.scenario.order
        members, wrong = {}, []
        for text, f, expected in self.scenario.schrodinger_members:
            members[text] = weyl_gelfand_member(f, order)
            if members[text] != expected:
                wrong.append(text)
        return self._result(CheckName.schrodinger_member, not wrong, {"members": members, "unexpected": wrong})

    # ---------------------------------------------------------------------------
    # Product laws and positive deformations
    # ---------------------------------------------------------------------------

    def _samples(self, check: CheckName, base: list) -> list:
        sc = self.scenario
        props = sc.setup.properties
        rng = self._rngs[check]
        extra = [
            random_poly(rng, sc.chart, sc.n, props.sample_degree, density=0.6)
            for _ in range(props.random_samples)
        ]
        return base + extra

    def check_assoc(self) -> CheckResult:
        sc = self.scenario
        base = default_triple_samples(sc.chart, sc.n, sc.setup.properties.sample_degree)
        res = assoc_check(sc.generator, self._samples(CheckName.assoc, base), sc.order)
        body = {"tested": res.tested, "witness": res.witness and list(res.witness), "detail": res.detail}
        return self._result(CheckName.assoc, res.passed, body)

    def check_hermitian(self) -> CheckResult:
        sc = self.scenario
        base = default_pair_samples(sc.chart, sc.n, sc.setup.properties.sample_degree)
        res = hermitian_check(sc.generator, self._samples(CheckName.hermitian, base), sc.order)
        body = {"tested": res.tested, "witness": res.witness and list(res.witness), "detail": res.detail}
        return self._result(CheckName.hermitian, res.passed, body)

    def check_deform(self) -> CheckResult:
        sc = self.scenario
        grid = sc.setup.deform.grid_exponent
        rep = deform_functional(sc.functional, sc.generator, sc.degree, sc.order, sc.deform_cap, grid)
        body = {
            "c": rep.c,
            "cap": rep.cap,
            "grid": f"1/2^{grid}",
            "status": rep.verdict.label(),
            "trials": [[c, ok] for c, ok in rep.trials],
            "kernel": [to_series_poly(v, rep.gram.basis, rep.gram.order) for v in rep.kernel.vectors]
            if rep.kernel
            else [],
        }
        if not rep.passed:
            body["witness"] = format_vector(rep.verdict.witness)
            body["value"] = rep.verdict.value
        return self._result(CheckName.deform, rep.passed, body)


def run_scenario(scenario: Scenario) -> Report:
    return ScenarioRunner(scenario).run()
