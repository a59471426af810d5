"""Golden scenario suite: every `<name>.toml` in the golden folder is run
twice (determinism) and its body compared with `<name>.expected.json`."""
import logging
import os
from dataclasses import dataclass, field

from glob_utils.file.utils import search_for_file_with_ext

from dq_workbench.default.set_default_dir import AppStdDir, get_dir
from dq_workbench.runner.computation import run_scenario
from dq_workbench.runner.report import Report, compare_subset, read_json, save_json
from dq_workbench.runner.setup import load_scenario

logger = logging.getLogger(__name__)

EXPECTED_EXT = ".expected.json"
SCENARIO_EXT = ".toml"


@dataclass
class GoldenResult:
    name: str
    passed: bool
    report: Report = None
    deterministic: bool = True
    mismatches: list = field(default_factory=list)

    def summary(self) -> str:
        if self.passed:
            return f"{self.name}: pass"
        lines = [f"{self.name}: FAIL"]
        if not self.deterministic:
            lines.append("  report body differs between two runs")
        if self.report is not None and not self.report.passed:
            failed = [c.name for c in self.report.checks if not c.passed]
            lines.append(f"  failing checks: {', '.join(failed)}")
        lines.extend(f"  mismatch {m}" for m in self.mismatches)
        return "\n".join(lines)


def golden_scenarios(directory: str = None) -> list[str]:
    directory = directory or get_dir(AppStdDir.golden)
    try:
        filenames = search_for_file_with_ext(directory, ext=SCENARIO_EXT)
    except FileNotFoundError as e:
        logger.warning(f"FileNotFoundError: ({e})")
        return []
    return sorted(os.path.join(directory, f) for f in filenames)


def expected_path(scenario_path: str) -> str:
    return scenario_path[: -len(SCENARIO_EXT)] + EXPECTED_EXT


def verify_golden(path: str, overrides: dict = None) -> GoldenResult:
    """Run one golden scenario twice and compare with its expectation

    Raises:
        ScenarioError: the scenario does not parse or validate
    """
    name = os.path.basename(path)[: -len(SCENARIO_EXT)]
    first = run_scenario(load_scenario(path, overrides))
    second = run_scenario(load_scenario(path, overrides))
    deterministic = first.body_text() == second.body_text()
    mismatches = []
    exp_path = expected_path(path)
    if os.path.isfile(exp_path):
        mismatches = compare_subset(read_json(exp_path), first.body())
    else:
        mismatches = [f"{exp_path}: missing expectation file"]
    passed = deterministic and first.passed and not mismatches
    if not passed:
        logger.warning(f"GOLDEN: {name} fails ({len(mismatches)} mismatches)")
    return GoldenResult(name, passed, first, deterministic, mismatches)


def verify_all(directory: str = None, overrides: dict = None, report_dir: str = None) -> list[GoldenResult]:
    """Run the whole golden suite; reports are written to `report_dir` when
    given"""
    results = []
    for path in golden_scenarios(directory):
        res = verify_golden(path, overrides)
        if report_dir:
            res.report.save(os.path.join(report_dir, f"{res.name}.report.json"))
        results.append(res)
    return results


def suite_summary(results: list[GoldenResult]) -> str:
    if not results:
        return "no golden scenarios found"
    lines = [r.summary() for r in results]
    failed = sum(1 for r in results if not r.passed)
    lines.append("all scenarios pass" if not failed else f"{failed} of {len(results)} scenarios fail")
    return "\n".join(lines)


def write_expectation(path: str, report: Report) -> str:
    """Store the full body of a report as the expectation of a scenario"""
    out = expected_path(path)
    save_json(out, report.body())
    return out
