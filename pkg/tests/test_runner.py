import json
import os
import pathlib
import re
import shutil
import subprocess
import sys

import pytest
from glob_utils.directory.inout_dir import DefaultDir

from dq_workbench.algebra.series import TruncatedSeries
from dq_workbench.default.set_default_dir import APP_DIRS, AppStdDir, get_dir, set_default_dirs
from dq_workbench.main import EXIT_FAIL, EXIT_INVALID, EXIT_OK, main
from dq_workbench.runner.computation import run_scenario
from dq_workbench.runner.export import golden_scenarios, verify_all, verify_golden
from dq_workbench.runner.report import CheckResult, compare_subset, read_json, to_jsonable
from dq_workbench.runner.setup import ScenarioError, ScenarioSetup, load_scenario, locate_key

ROOT = pathlib.Path(__file__).resolve().parents[1]

TABLE_SCENARIO = """\
name = "short_table"
product = "wick"
degree = 1
order = 1
checks = ["gram"]

[functional]
kind = "table"
table = {"1" = "1", "z*zb" = "2*l"}
"""

CUSTOM_WEYL = """\
product = "custom"
chart = "phase-space"
degree = 1
order = 2
checks = ["assoc", "hermitian", "psd"]

[generator]
terms = [
    {left = "q", right = "p", coeff = "1i/2"},
    {left = "p", right = "q", coeff = "-1i/2"},
]

[expect]
psd = false
"""


def _setup(**kwargs) -> ScenarioSetup:
    setup = ScenarioSetup()
    setup.set_from_dict(**kwargs)
    return setup


def _write(tmp_path: pathlib.Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _golden(tmp_path: pathlib.Path, name: str) -> str:
    src = os.path.join(get_dir(AppStdDir.golden), f"{name}.toml")
    return shutil.copy(src, tmp_path / f"{name}.toml")


# ===============================================================================
#     Setup
# ===============================================================================


def test_unknown_keys():
    with pytest.raises(ScenarioError) as e:
        _setup(bogus=1)
    assert e.value.key == "bogus"
    with pytest.raises(ScenarioError, match="table"):
        _setup(functional=3)


@pytest.mark.parametrize(
    "settings, key",
    [
        ({"product": "foo", "checks": ["gram"]}, "product"),
        ({"degree": 99, "checks": ["gram"]}, "degree"),
        ({"order": True, "checks": ["gram"]}, "order"),
        ({"checks": []}, "checks"),
        ({"checks": ["gram"], "product": "weyl-moyal", "chart": "complex"}, "chart"),
        ({"checks": ["gram"], "expect": {"psd": False}}, "psd"),
        ({"checks": ["gram"], "observables": ["z +"]}, "observables"),
        ({"checks": ["gram"], "functional": {"kind": "smoothed-delta", "smoothing": "n-operator"}}, "smoothing"),
        ({"checks": ["gram"], "deform": {"cap": "-1"}}, "cap"),
        (
            {
                "checks": ["assoc"],
                "product": "custom",
                "chart": "phase-space",
                "generator": {"terms": [{"left": "q", "right": "p"}]},
            },
            "terms",
        ),
        (
            {
                "checks": ["assoc"],
                "product": "custom",
                "chart": "phase-space",
                "order": 2,
                "generator": {
                    "expansion": "linear",
                    "terms": [
                        {"left": "q", "right": "p", "coeff": "1i/2"},
                        {"left": "p", "right": "q", "coeff": "-1i/2"},
                    ],
                },
            },
            "terms",
        ),
    ],
)
def test_resolve_errors(settings, key):
    with pytest.raises(ScenarioError) as e:
        _setup(**settings).resolve()
    assert e.value.key == key


def test_resolve_defaults():
    sc = _setup(checks=["gram"]).resolve()
    assert sc.chart.value == "complex" and sc.observable_degree == 1
    assert [str(o) for o in sc.observables] == ["z", "zb"]
    assert sc.setup.to_dict()["functional"]["kind"] == "delta-origin"


def test_setup_save_reloads(tmp_path):
    setup = _setup(name="saved", product="weyl-moyal", degree=2, checks=["gram", "psd"])
    path = str(tmp_path / "saved.json")
    setup.save(path)
    data = read_json(path)
    assert data["name"] == "saved" and data["checks"] == ["gram", "psd"]
    again = _setup(**data).resolve()
    assert again.chart.value == "phase-space" and again.degree == 2


def test_locate_key():
    text = 'name = "x"\nproduct = "foo"\n\n[functional]\nkind = "table"\ntable = {"1" = "1"}\n'
    assert locate_key(text, "product") == 2
    assert locate_key(text, "functional") == 4
    assert locate_key(text, "kind") == 5
    assert locate_key(text, "missing") is None


def test_load_errors_name_the_line(tmp_path):
    path = _write(tmp_path, "bad.toml", 'name = "bad"\nchecks = ["gram"]\ndegree = 99\n')
    with pytest.raises(ScenarioError, match=rf"^{re.escape(path)}:3: degree"):
        load_scenario(path)
    path = _write(tmp_path, "syntax.toml", 'name = "bad"\nchecks = ["gram"\n')
    with pytest.raises(ScenarioError, match="syntax.toml"):
        load_scenario(path)
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(str(tmp_path / "absent.toml"))


def test_missing_table_monomial(tmp_path):
    path = _write(tmp_path, "short_table.toml", TABLE_SCENARIO)
    with pytest.raises(ScenarioError, match="missing the monomial z"):
        load_scenario(path)


# ===============================================================================
#     Reports
# ===============================================================================


def test_compare_subset():
    actual = {"a": 1, "b": [1, 3], "c": {"d": "x"}}
    assert compare_subset({"a": 1, "c": {}}, actual) == []
    assert compare_subset({"b": [1, 2]}, actual) == ["$.b[1]: expected 2, got 3"]
    assert compare_subset({"x": 1}, actual) == ["$.x: missing"]
    assert compare_subset({"b": [1]}, actual) == ["$.b: expected [1], got [1, 3]"]
    assert compare_subset({"c": {"d": "y"}}, actual) == ["$.c.d: expected 'y', got 'x'"]


def test_reports_reject_floats():
    with pytest.raises(TypeError):
        to_jsonable({"x": 0.5})


def test_check_result_expectation():
    assert CheckResult("psd", False, "", expected=False).passed
    assert not CheckResult("psd", True, "", expected=False).passed
    assert not CheckResult("psd", True, "", error="boom").passed
    assert CheckResult("psd", True, "", {"value": 1}).to_dict()["value"] == 1


def test_custom_scenario(tmp_path):
    report = run_scenario(load_scenario(_write(tmp_path, "custom_weyl.toml", CUSTOM_WEYL)))
    assert report.passed and report.exit_code == 0
    assert report.scenario["name"] == "custom_weyl"
    psd = report.checks[2].to_dict()
    assert psd["holds"] is False and psd["expected"] is False and psd["witness"] == ["0", "1", "1i"]


def test_unexpected_failure_exits_one():
    setup = _setup(product="weyl-moyal", checks=["gram", "psd"])
    report = run_scenario(setup.resolve())
    assert not report.passed and report.exit_code == 1
    assert report.checks[0].passed and not report.checks[1].passed


def test_reports_are_deterministic():
    setup = _setup(checks=["psd", "assoc"], seed=11, properties={"random_samples": 2, "sample_degree": 1, "quadratic_vectors": 16})
    first = run_scenario(setup.resolve()).body_text()
    assert first == run_scenario(setup.resolve()).body_text()
    assert json.loads(first)["seed"] == 11


def test_wick_delta_bodies():
    setup = _setup(degree=2, order=2, checks=["gram", "kernel", "gns"])
    gram, kernel, gns = (c.to_dict() for c in run_scenario(setup.resolve()).checks)
    assert gram["passed"] and gram["hermitian"] is True
    assert kernel["passed"] and kernel["annihilated"] is True and kernel["ideal_null"] is True
    assert gns["passed"] and gns["state_identity_defects"] == []


def test_broken_parts_fail_their_checks(monkeypatch):
    setup = _setup(degree=2, order=2, checks=["gram", "kernel", "gns"])
    monkeypatch.setattr("dq_workbench.runner.computation.hermitian_defect", lambda entries: (0, 1))
    monkeypatch.setattr("dq_workbench.runner.computation.gelfand_ideal_basis", lambda *args, **kwargs: [])
    monkeypatch.setattr(
        "dq_workbench.runner.computation.eval_functional", lambda omega, f: TruncatedSeries.constant(1, 2)
    )
    gram, kernel, gns = (c.to_dict() for c in run_scenario(setup.resolve()).checks)
    assert not gram["passed"] and gram["hermitian"] is False
    assert not kernel["passed"] and kernel["ideal"] == []
    assert not gns["passed"] and gns["state_identity_defects"] == ["z", "zb"]


def test_schrodinger_apply_compares_with_operator(monkeypatch):
    setup = _setup(product="weyl-moyal", order=2, checks=["schrodinger-apply"], schrodinger={"apply": [["p", "q^3"]]})
    res = run_scenario(setup.resolve()).checks[0].to_dict()
    assert res["passed"] and res["operator_disagreements"] == []
    monkeypatch.setattr(
        "dq_workbench.runner.computation.schrodinger_apply", lambda f, psi, order: TruncatedSeries.zeros(order)
    )
    res = run_scenario(setup.resolve()).checks[0].to_dict()
    assert not res["passed"] and len(res["operator_disagreements"]) == 1


def test_random_schrodinger_pairs():
    setup = _setup(
        product="weyl-moyal",
        order=2,
        checks=["schrodinger-op"],
        schrodinger={"operators": ["q"], "random_pairs": 3, "pair_degree": 2},
    )
    res = run_scenario(setup.resolve()).checks[0].to_dict()
    assert res["passed"]
    assert res["homomorphism"] == {"pairs": 4, "failures": []}
    assert res["adjoint"] == {"symbols": 7, "failures": []}


def test_errors_inside_checks_are_reported():
    # GNS needs a psd form
    report = run_scenario(_setup(product="weyl-moyal", checks=["gns"]).resolve())
    res = report.checks[0]
    assert not res.passed and res.error.startswith("GnsError")


# ===============================================================================
#     Golden suite
# ===============================================================================


def test_default_dirs(tmp_path):
    set_default_dirs(reports=str(tmp_path))
    assert isinstance(APP_DIRS, DefaultDir)
    assert os.path.samefile(get_dir(AppStdDir.reports), tmp_path)
    assert os.path.isfile(os.path.join(get_dir(AppStdDir.golden), "wick_delta.toml"))


def test_golden_catalogue(tmp_path):
    names = [os.path.basename(p) for p in golden_scenarios()]
    assert names == sorted(names) and "schrodinger.toml" in names and len(names) == 5
    _golden(tmp_path, "classical_delta")
    (tmp_path / "notes.json").write_text("{}")
    assert golden_scenarios(str(tmp_path)) == [os.path.join(str(tmp_path), "classical_delta.toml")]
    assert golden_scenarios(str(tmp_path / "absent")) == []


def test_corrupted_golden_names_the_path(tmp_path):
    path = _golden(tmp_path, "classical_delta")
    gram = {"check": "gram", "matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]]}
    (tmp_path / "classical_delta.expected.json").write_text(json.dumps({"checks": [gram, {}, {}, {}, {}, {}]}))
    res = verify_golden(path)
    assert not res.passed and res.deterministic
    assert res.mismatches == ["$.checks[0].matrix[1][1]: expected '1', got '0'"]
    assert "FAIL" in res.summary()


def test_missing_expectation(tmp_path):
    _golden(tmp_path, "classical_delta")
    (res,) = verify_all(str(tmp_path))
    assert not res.passed and "missing expectation file" in res.mismatches[0]


def test_write_expected_then_verify(tmp_path):
    path = _golden(tmp_path, "classical_delta")
    assert main(["scenario", "run", path, "--write-expected"]) == EXIT_OK
    assert read_json(str(tmp_path / "classical_delta.expected.json"))["passed"] is True
    assert verify_golden(path).passed


@pytest.mark.slow
def test_golden_suite(tmp_path):
    results = verify_all(report_dir=str(tmp_path))
    assert len(results) == 5
    assert all(r.passed for r in results), [r.summary() for r in results]
    assert (tmp_path / "wick_delta.report.json").is_file()


# ===============================================================================
#     Command line
# ===============================================================================


def test_star_expand(capsys, tmp_path):
    out = str(tmp_path / "out.json")
    assert main(["star-expand", "z", "zb", "--order", "1", "--json", out]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["value"] == "z*zb + 2*l"
    assert read_json(out) == data


def test_check_commands(capsys):
    assert main(["psd-check", "--product", "weyl-moyal", "--degree", "1", "--order", "1"]) == EXIT_FAIL
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "indefinite" and data["value"] == "-l"
    assert main(["deform", "--product", "weyl-moyal", "--degree", "1", "--order", "1"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["c"] == "1/4"


def test_schrodinger_commands(capsys):
    assert main(["schrodinger", "op", "q*p", "--order", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["operator"] == "(-1/2i*l) + (-1i*l*q)*d/dq1"
    assert main(["schrodinger", "member", "p"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["member"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["star-expand", "z^", "zb"],
        ["star-expand", "q", "zb"],
        ["describe", "nope"],
        ["schrodinger", "apply", "q", "p"],
        ["gram", "--degree", "99"],
    ],
)
def test_invalid_input_exits_two(argv):
    assert main(argv) == EXIT_INVALID


def test_scenario_run(tmp_path, capsys):
    assert main(["scenario", "run", _write(tmp_path, "short_table.toml", TABLE_SCENARIO)]) == EXIT_INVALID
    report = str(tmp_path / "report.json")
    assert main(["scenario", "run", _golden(tmp_path, "classical_delta"), "--json", report]) == EXIT_OK
    assert "classical_delta: PASS" in capsys.readouterr().out
    data = read_json(report)
    assert data["passed"] and set(data["timings"]) == {c["check"] for c in data["checks"]}


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=str(ROOT))
    proc = subprocess.run(
        [sys.executable, "-m", "dq_workbench.main", "list"],
        capture_output=True,
        text=True,
        cwd=ROOT,
        env=env,
    )
    assert proc.returncode == 0
    assert "weyl-moyal" in proc.stdout and "wick_delta.toml" in proc.stdout
