"""JSON reports with exact literal values and golden subset comparison."""
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np
from glob_utils.directory.utils import mk_dir
from glob_utils.file.json_utils import read_json, save_to_json

from dq_workbench.algebra.constants import SUCCESS
from dq_workbench.algebra.poly import Poly
from dq_workbench.algebra.scalar import Scalar
from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.algebra.utils import format_fraction

logger = logging.getLogger(__name__)

TIMINGS = "timings"


def to_jsonable(obj: Any) -> Any:
    """Nested conversion to JSON types; exact values become literal strings"""
    if isinstance(obj, (TruncatedSeries, Poly, Scalar)):
        return str(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError(f"floating point value {obj!r} in an exact report")
    return str(obj)


def dumps(data: Any) -> str:
    return json.dumps(to_jsonable(data), indent=2, ensure_ascii=False)


def save_json(path: str, data: Any) -> None:
    """Write `data` as JSON with exact values as literal strings"""
    folder = os.path.dirname(path)
    if folder:
        mk_dir(folder)
    save_to_json(path, to_jsonable(data))
    logger.info(f"REPORT: written {path}")


def compare_subset(expected: Any, actual: Any, path: str = "$") -> list[str]:
    """JSON paths where `expected` is not contained in `actual`

    Dicts are compared on the expected keys only, lists element-wise with
    equal lengths, leaves by equality.
    """
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return [f"{path}: expected an object, got {actual!r}"]
        out = []
        for k, v in expected.items():
            if k not in actual:
                out.append(f"{path}.{k}: missing")
            else:
                out.extend(compare_subset(v, actual[k], f"{path}.{k}"))
        return out
    if isinstance(expected, list):
        if not isinstance(actual, list) or len(actual) != len(expected):
            return [f"{path}: expected {expected!r}, got {actual!r}"]
        out = []
        for i, (e, a) in enumerate(zip(expected, actual)):
            out.extend(compare_subset(e, a, f"{path}[{i}]"))
        return out
    if expected != actual:
        return [f"{path}: expected {expected!r}, got {actual!r}"]
    return []


# ===============================================================================
#     Check results and reports
# ===============================================================================


@dataclass
class CheckResult:
    """Outcome of one scenario check

    holds: whether the checked property holds

    expected: outcome declared in the scenario (true by default)

    body: exact values of the check, converted by `to_jsonable`
    """

    name: str
    holds: bool
    claim: str
    body: dict = field(default_factory=dict)
    expected: bool = True
    error: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.error and self.holds == self.expected

    def to_dict(self) -> dict:
        out = {
            "check": self.name,
            "passed": self.passed,
            "holds": self.holds,
            "expected": self.expected,
            "claim": self.claim,
        }
        if self.error:
            out["error"] = self.error
        out.update(to_jsonable(self.body))
        return out


@dataclass
class Report:
    scenario: dict
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def body(self) -> dict:
        """Deterministic part of the report"""
        return {
            "scenario": to_jsonable(self.scenario),
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_dict(self) -> dict:
        out = self.body()
        out[TIMINGS] = {c.name: f"{c.seconds:.6f}" for c in self.checks}
        return out

    def body_text(self) -> str:
        return dumps(self.body())

    def save(self, path: str) -> None:
        save_json(path, self.to_dict())

    def summary(self) -> str:
        lines = [f"scenario {self.scenario.get('name')}: {SUCCESS[self.passed]}"]
        for c in self.checks:
            extra = f" ({c.error})" if c.error else ""
            lines.append(f"  {c.name:<20} {SUCCESS[c.passed]}  {c.claim}{extra}")
        return "\n".join(lines)
