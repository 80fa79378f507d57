import json
import math
import shutil
import subprocess
import sys

import pytest

from matconvex.cli import EXIT_CODES, SCHEMA, SEED_ENV, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def strip_duration(report):
    return {k: v for k, v in report.items() if k != "duration_seconds"}


def test_exit_code_table():
    assert EXIT_CODES == {"pass": 0, "fail": 1, "indeterminate": 3}


def test_classify_reciprocal_passes(capsys):
    code, rep, err = invoke(capsys, "classify", "--function", "recip", "--interval", "(0.1,10)", "--order", "3",
                            "--property", "convex", "--trials", "200", "--seed", "7")
    assert code == 0 and rep["status"] == "pass" and rep["result"]["label"] == "sampled-pass"
    assert rep["schema"] == SCHEMA and "tool_version" in rep and rep["duration_seconds"] >= 0
    assert rep["run_config"]["seed"] == 7 and rep["run_config"]["order"] == 3
    assert err.startswith("PASS")


def test_gap_reports_exact_coefficients(capsys):
    code, rep, _ = invoke(capsys, "gap", "--order", "2", "--degree", "4", "--interval", "(-1,1)", "--kind", "concave")
    assert code == 0 and rep["result"]["coefficients"] == ["1", "-1/2", "1/3", "-1/4"]
    assert rep["result"]["certified"]


def test_classify_cube_fails_with_counterexample(capsys):
    code, rep, _ = invoke(capsys, "classify", "--function", "poly:0,0,0,1", "--interval", "(0.1,10)",
                          "--order", "2", "--property", "convex")
    ce = rep["result"]["counterexample"]
    assert code == 1 and rep["status"] == "fail"
    t1, t2 = ce["nodes"]
    assert ce["determinant"] == pytest.approx(-(t1 - t2) ** 2, rel=1e-10)


def test_strict_boundary_case_is_indeterminate(capsys):
    code, rep, _ = invoke(capsys, "matrices", "--function", "poly:0,0,1", "--kind", "K", "--point", "0.5",
                          "--order", "2", "--strict")
    assert code == 3 and rep["result"]["verdict"] == "indeterminate"


def test_divdiff_prints_table(capsys):
    code, rep, _ = invoke(capsys, "divdiff", "--function", "exp", "--nodes", "0,1,2", "--quadrature")
    assert code == 0
    assert rep["result"]["value"] == pytest.approx((math.e - 1) ** 2 / 2, rel=1e-14)
    assert rep["result"]["table"]["value"] == rep["result"]["value"]
    assert rep["result"]["quadrature_difference"] <= 1e-10


def test_matrices_entries(capsys):
    code, rep, _ = invoke(capsys, "matrices", "--function", "poly:0,0,0,0,1", "--kind", "K", "--point", "1",
                          "--order", "2")
    assert code == 1 and rep["result"]["entries"] == [[6, 4], [4, 1]]
    code, rep, _ = invoke(capsys, "matrices", "--function", "recip", "--kind", "kraus", "--nodes", "1,2", "--s", "1")
    assert code == 0 and set(rep["result"]) >= {"kind", "nodes", "s", "entries", "eigenvalues", "verdict", "tolerance"}


def test_transform_values_and_checks(capsys):
    code, rep, _ = invoke(capsys, "transform", "--kind", "S", "--function", "recip", "--anchor", "2",
                          "--eval-at", "1,3")
    assert code == 0 and rep["result"]["values"] == pytest.approx([-4.0, -4.0], rel=1e-9)
    code, rep, _ = invoke(capsys, "transform", "--kind", "T", "--function", "exp", "--interval", "(-1,1)",
                          "--anchor", "0", "--roundtrip")
    assert code == 0 and rep["result"]["max_relative_error"] <= 1e-8


def test_transform_hypothesis_violation_is_a_failure(capsys):
    code, rep, _ = invoke(capsys, "transform", "--kind", "S", "--function", "lin:1,0", "--anchor", "0")
    assert code == 1 and "hypothesis_violated" in rep["result"]


def test_oracle_finds_cube_witness(capsys):
    code, rep, _ = invoke(capsys, "oracle", "--function", "poly:0,0,0,1", "--interval", "(0.1,3)", "--order", "2",
                          "--trials", "2000")
    w = rep["result"]["witness"]
    assert code == 1 and w["deficit_min_eigenvalue"] < 0
    assert len(w["A"]["matrix"][0][0]) == 2  # [re, im] pairs


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "bogus"],
    ["classify", "--function", "sin", "--interval", "(0,1)", "--order", "2"],
    ["classify", "--function", "recip", "--interval", "(1,0)", "--order", "2"],
    ["classify", "--function", "recip", "--interval", "(0.1,10)"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    code, rep, _ = invoke(capsys, *argv)
    assert code == 2 and rep is None


def test_identical_runs_are_byte_identical_apart_from_duration(capsys):
    argv = ["classify", "--function", "exp", "--interval", "(-1,1)", "--order", "3", "--trials", "50", "--seed", "5"]
    _, a, _ = invoke(capsys, *argv)
    _, b, _ = invoke(capsys, *argv)
    assert json.dumps(strip_duration(a), sort_keys=True) == json.dumps(strip_duration(b), sort_keys=True)


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "42")
    _, rep, _ = invoke(capsys, "classify", "--function", "recip", "--interval", "(0.1,10)", "--order", "2",
                       "--trials", "5")
    assert rep["run_config"]["seed"] == 42
    monkeypatch.setenv(SEED_ENV, "forty-two")
    code, _, _ = invoke(capsys, "classify", "--function", "recip", "--interval", "(0.1,10)", "--order", "2")
    assert code == 2


def test_output_file_matches_stdout(capsys, tmp_path):
    path = tmp_path / "report.json"
    code = run(["gap", "--order", "1", "--degree", "2", "--interval", "(0,2)", "--output", str(path), "--quiet"])
    out, err = capsys.readouterr()
    assert code == 0 and err == "" and path.read_text() == out


def test_verify_suite_lines_go_to_stderr(capsys):
    code, rep, err = invoke(capsys, "verify", "--suite", "two-convex", "--seed", "1")
    assert code == 0 and rep["result"]["criteria"] == {"5": "pass"}
    assert "[PASS] 5." in err


@pytest.mark.skipif(shutil.which("matconvex") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["matconvex", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "matconvex" in proc.stdout


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "matconvex.cli", "divdiff", "--function", "recip", "--nodes", "1,2",
                           "--quiet"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["value"] == -0.5
