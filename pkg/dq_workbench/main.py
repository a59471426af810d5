"""Command line front end of the workbench.

    python -m dq_workbench.main gram --product wick --degree 1 --order 2
    python -m dq_workbench.main scenario run my_scenario.toml --json out.json
    python -m dq_workbench.main verify-all

Exit codes: 0 all checks pass, 1 a check fails, 2 invalid input.
"""
import argparse
import logging
import os
import sys

from glob_utils.log.log import change_level_logging, main_log

from dq_workbench import __version__
from dq_workbench.algebra.constants import PRODUCT_INFOS, Chart, CheckName, GeneratorTag
from dq_workbench.algebra.literals import LiteralError, parse_series_poly
from dq_workbench.algebra.poly import PolyError
from dq_workbench.algebra.schrodinger import (
    SchrodingerError,
    schrodinger_apply,
    schrodinger_operator,
    weyl_gelfand_member,
)
from dq_workbench.algebra.star import BidiffGenerator, StarProductError, describe, star_multiply
from dq_workbench.default.set_default_dir import AppStdDir, get_dir, set_default_dirs
from dq_workbench.runner.computation import CHECK_ERRORS, ScenarioRunner, run_scenario
from dq_workbench.runner.export import golden_scenarios, suite_summary, verify_all, write_expectation
from dq_workbench.runner.report import dumps, save_json
from dq_workbench.runner.setup import (
    FUNCTIONAL_KINDS,
    RANDOM_TABLE,
    ScenarioError,
    ScenarioSetup,
    load_scenario,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

# command -> scenario check
CHECK_COMMANDS = {
    "gram": CheckName.gram,
    "psd-check": CheckName.psd,
    "kernel": CheckName.kernel,
    "gns": CheckName.gns,
    "classical-limit": CheckName.classical_limit,
    "verify-theorem": CheckName.theorem,
    "no-go": CheckName.no_go,
    "deform": CheckName.deform,
}

FUNCTIONAL_DOCS = {
    "delta-origin": "evaluation at the origin, f -> f(0)",
    "smoothed-delta": "delta-origin composed with exp(c l Laplacian) or with the N operator",
    "gaussian-moment": "zero-section Gaussian moments (phase-space chart)",
    "table": "explicit values on monomials, series literals per monomial",
    RANDOM_TABLE: "seeded table whose l^0 part is a positive Gaussian mixture (faithful)",
}

CHECK_DOCS = {
    CheckName.gram: "Gram form omega(e_i* * e_j) on the monomials of degree <= d",
    CheckName.psd: "exact psd decision up to l^N with witness or layered decomposition",
    CheckName.kernel: "Gel'fand ideal basis in degree <= d with per-order dimensions",
    CheckName.gns: "GNS presentation: quotient, inner products, observable matrices",
    CheckName.classical_limit: "quotient by H_0 and the functor checks",
    CheckName.theorem: "intertwiner between the classical limit and the classical GNS representation",
    CheckName.no_go: "commutator obstruction for rank-1 representations",
    CheckName.ideal_reduction: "l^0 reduction of the quantum kernel against the classical kernel",
    CheckName.schrodinger_op: "differential operators rho(f), homomorphism and adjoint laws",
    CheckName.schrodinger_apply: "rho(f) psi = iota* N (f * psi)",
    CheckName.schrodinger_member: "membership iota* N f = 0 in the Weyl Gel'fand ideal",
    CheckName.assoc: "sampled associativity of the product",
    CheckName.hermitian: "sampled (f * g)* = g* * f*",
    CheckName.deform: "minimal c with omega o exp(c l Laplacian) positive",
}


# ===============================================================================
#     Argument parser
# ===============================================================================


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", "-N", type=int, default=None, help="truncation order N")
    p.add_argument("--degree", "-d", type=int, default=None, help="filtration degree d")
    p.add_argument("--seed", type=int, default=None, help="seed of the randomized checks")
    p.add_argument("--json", metavar="OUT", default=None, help="write the result as JSON")
    return p


def _state(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--product", default=GeneratorTag.wick.value, choices=[t.value for t in PRODUCT_INFOS])
    parser.add_argument("--chart", default="", choices=[""] + [c.value for c in Chart])
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--functional", default="delta-origin", choices=[k for k in FUNCTIONAL_KINDS if k != "table"])
    parser.add_argument("--smoothing", default="laplace", choices=["laplace", "n-operator", "n-inverse"])
    parser.add_argument("--c", default="0", help="smoothing parameter (rational literal)")
    parser.add_argument("--observable", action="append", default=[], help="observable literal, repeatable")
    parser.add_argument("--cap", default=None, help="upper bound of the deform search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dq_workbench", description="Exact deformation quantization workbench")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--log-file", default=None)
    common = _common()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("star-expand", parents=[common], help="f * g up to l^N")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--product", default=GeneratorTag.wick.value, choices=[t.value for t in PRODUCT_INFOS])
    p.add_argument("--chart", default="", choices=[""] + [c.value for c in Chart])
    p.add_argument("--n", type=int, default=1)

    for name, check in CHECK_COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=CHECK_DOCS[check])
        _state(p)

    p = sub.add_parser("schrodinger", help="Schroedinger representation of Weyl-Moyal symbols")
    ssub = p.add_subparsers(dest="action", required=True)
    for action, args in (("op", ["f"]), ("apply", ["f", "psi"]), ("member", ["f"])):
        sp = ssub.add_parser(action, parents=[common])
        for a in args:
            sp.add_argument(a)
        sp.add_argument("--n", type=int, default=1)

    p = sub.add_parser("scenario", help="scenario files")
    ssub = p.add_subparsers(dest="action", required=True)
    sp = ssub.add_parser("run", parents=[common])
    sp.add_argument("file")
    sp.add_argument("--write-expected", action="store_true", help="store the body as <name>.expected.json")

    p = sub.add_parser("verify-all", parents=[common], help="run the golden suite")
    p.add_argument("--dir", default=None, help="golden folder (the in-package one by default)")
    p.add_argument("--reports", default=None, help="folder for the per-scenario reports")

    sub.add_parser("list", help="built-in products, functionals, checks and golden scenarios")
    p = sub.add_parser("describe", help="metadata of a product, functional or check")
    p.add_argument("name")
    return parser


# ===============================================================================
#     Commands
# ===============================================================================


def _emit(args: argparse.Namespace, data) -> None:
    print(dumps(data))
    if getattr(args, "json", None):
        save_json(args.json, data)


def _overrides(args: argparse.Namespace) -> dict:
    return {k: getattr(args, k, None) for k in ("order", "degree", "seed")}


def cmd_star_expand(args: argparse.Namespace) -> int:
    gen = BidiffGenerator.from_tag(args.product, args.n, Chart(args.chart) if args.chart else None)
    order = 2 if args.order is None else args.order
    f = parse_series_poly(args.f, gen.chart, gen.n, order)
    g = parse_series_poly(args.g, gen.chart, gen.n, order)
    value = star_multiply(f, g, gen, order)
    _emit(args, {"product": gen.tag.value, "f": f, "g": g, "order": order, "value": value})
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    check = CHECK_COMMANDS[args.command]
    setup = ScenarioSetup()
    setup.set_from_dict(
        name=args.command,
        product=args.product,
        chart=args.chart,
        n=args.n,
        observables=list(args.observable),
        checks=[check.value],
        functional={"kind": args.functional, "smoothing": args.smoothing, "c": args.c},
    )
    setup.set_from_dict(**{k: v for k, v in _overrides(args).items() if v is not None})
    if args.cap is not None:
        setup.deform.cap = args.cap
    result = ScenarioRunner(setup.resolve()).run().checks[0]
    _emit(args, result.to_dict())
    return EXIT_OK if result.passed else EXIT_FAIL


def cmd_schrodinger(args: argparse.Namespace) -> int:
    order = args.order
    lit_order = 8 if order is None else order
    f = parse_series_poly(args.f, Chart.phase_space, args.n, lit_order)
    f_arg = f.coeffs[0] if order is None and not any(f.coeffs[1:]) else f
    if args.action == "op":
        data = {"f": f, "operator": str(schrodinger_operator(f_arg, order))}
    elif args.action == "apply":
        psi = parse_series_poly(args.psi, Chart.phase_space, args.n, lit_order)
        psi_arg = psi.coeffs[0] if order is None and not any(psi.coeffs[1:]) else psi
        data = {"f": f, "psi": psi, "value": schrodinger_apply(f_arg, psi_arg, order)}
    else:
        data = {"f": f, "member": weyl_gelfand_member(f_arg, order)}
    _emit(args, data)
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.file, _overrides(args))
    report = run_scenario(scenario)
    print(report.summary())
    if args.json:
        report.save(args.json)
    if args.write_expected:
        logger.info(f"written {write_expectation(args.file, report)}")
    return report.exit_code


def cmd_verify_all(args: argparse.Namespace) -> int:
    report_dir = None
    if args.reports:
        set_default_dirs(reset=True, reports=args.reports)
        report_dir = get_dir(AppStdDir.reports)
    results = verify_all(args.dir, _overrides(args), report_dir)
    print(suite_summary(results))
    if args.json:
        save_json(
            args.json,
            {
                "passed": all(r.passed for r in results),
                "scenarios": {r.name: {"passed": r.passed, "mismatches": r.mismatches} for r in results},
            },
        )
    return EXIT_OK if results and all(r.passed for r in results) else EXIT_FAIL


def cmd_list(args: argparse.Namespace) -> int:
    print("products:    " + ", ".join(t.value for t in PRODUCT_INFOS))
    print("functionals: " + ", ".join(FUNCTIONAL_KINDS))
    print("checks:      " + ", ".join(c.value for c in CheckName))
    names = [os.path.basename(p) for p in golden_scenarios()]
    print("golden:      " + (", ".join(names) if names else "-") + f"  ({get_dir(AppStdDir.golden)})")
    return EXIT_OK


def cmd_describe(args: argparse.Namespace) -> int:
    name = args.name
    if name in [t.value for t in PRODUCT_INFOS]:
        print(describe(name))
        print(BidiffGenerator.from_tag(name))
    elif name in FUNCTIONAL_DOCS:
        print(f"{name}: {FUNCTIONAL_DOCS[name]}")
    elif name in [c.value for c in CheckName]:
        print(f"{name}: {CHECK_DOCS[CheckName(name)]}")
    else:
        logger.error(f"unknown name {name!r}, see the list command")
        return EXIT_INVALID
    return EXIT_OK


COMMANDS = {
    "star-expand": cmd_star_expand,
    "schrodinger": cmd_schrodinger,
    "scenario": cmd_scenario,
    "verify-all": cmd_verify_all,
    "list": cmd_list,
    "describe": cmd_describe,
}


_log_ready = False


def _init_logging(args: argparse.Namespace) -> None:
    global _log_ready
    if not _log_ready:
        main_log()
        _log_ready = True
    change_level_logging(logging.DEBUG if args.verbose else logging.WARNING)
    if args.log_file:
        handler = logging.FileHandler(args.log_file, encoding="utf-8")
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logging.getLogger().addHandler(handler)


def main(argv: list[str] = None) -> int:
    """Run the workbench command line, return the exit code"""
    args = build_parser().parse_args(argv)
    _init_logging(args)
    handler = COMMANDS.get(args.command, cmd_check)
    try:
        return handler(args)
    except (ScenarioError, StarProductError, LiteralError, PolyError, SchrodingerError) + CHECK_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
