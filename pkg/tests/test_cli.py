import csv
import io
import json
import subprocess
import sys

import pytest

from knot52.cli import cmd_lift, cmd_solve, cmd_verify, main


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv, "--format", "json")
    return code, json.loads(out)


# -- verify -------------------------------------------------------------------

def test_verify_passes_at_one(capsys):
    code, doc = run_json(capsys, "verify", "--s", "1")
    assert code == 0
    assert doc["status"] == "pass"
    assert doc["schema_version"] == "1"
    assert len(doc["results"]["checks"]) == 10


def test_verify_text_output(capsys):
    code, out, _ = run_cli(capsys, "verify", "--s", "1")
    assert code == 0
    assert out.startswith("verify: PASS")
    assert "[PASS] relation_wx_eq_yw" in out


def test_verify_negative_s_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--s", "-2")
    assert code == 2
    assert "positive" in err


def test_verify_unattainable_tolerance_fails(capsys):
    code, doc = run_json(capsys, "verify", "--s", "1", "--tol", "1e-30")
    assert code == 1
    assert doc["status"] == "fail"


@pytest.mark.parametrize("s", ["1e-6", "1e6"])
def test_verify_grid_ends_pass_with_default_precision(capsys, s):
    code, _ = run_json(capsys, "verify", "--s", s)
    assert code == 0


def test_verify_binary64_fails_at_grid_end(capsys):
    code, doc = run_json(capsys, "verify", "--s", "1e-6", "--dps", "0")
    assert code == 1
    failed = {c["name"] for c in doc["results"]["checks"] if not c["pass"]}
    assert "longitude_offdiag_relative" in failed


def test_verify_missing_argument(capsys):
    code, _, _ = run_cli(capsys, "verify")
    assert code == 2


# -- solve / lift -------------------------------------------------------------

def test_solve_one(capsys):
    code, doc = run_json(capsys, "solve", "--slope", "1/1")
    assert code == 0
    res = doc["results"]
    assert res["slope"] == "1/1"
    assert res["g_residual"] <= 1e-12
    assert res["s_star"] < 1


def test_solve_prints_full_precision(capsys):
    code, out, _ = run_cli(capsys, "solve", "--slope", "3")
    assert code == 0
    doc = cmd_solve("3")
    assert repr(doc["results"]["s_star"]) in out


@pytest.mark.parametrize("slope", ["4/1", "0/1", "-1", "9/2"])
def test_solve_out_of_range(capsys, slope):
    code, _, err = run_cli(capsys, "solve", "--slope", slope)
    assert code == 2
    assert "(0, 4)" in err


@pytest.mark.parametrize("slope", ["1/0", "abc", "2.5"])
def test_solve_unparseable(capsys, slope):
    code, _, _ = run_cli(capsys, "solve", "--slope", slope)
    assert code == 2


def test_solve_nineteen_fifths(capsys):
    code, doc = run_json(capsys, "solve", "--slope", "19/5")
    assert code == 0
    assert doc["status"] == "pass"
    assert doc["results"]["lift_omega_residual"] <= 1e-7


def test_solve_unreachable_tolerance_is_math_failure(capsys):
    code, _, err = run_cli(capsys, "solve", "--slope", "1", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in err


def test_lift_two(capsys):
    code, doc = run_json(capsys, "lift", "--slope", "2/1")
    assert code == 0
    fil = doc["results"]["filling"]
    assert abs(complex(*fil["gamma"])) <= 1e-7
    assert abs(fil["omega"]) <= 1e-7


def test_lift_zero_slope(capsys):
    code, _, _ = run_cli(capsys, "lift", "--slope", "0/1")
    assert code == 2


def test_lift_twist_leaves_longitude_alone():
    base = cmd_lift("7/2")["results"]["longitude"]
    twisted = cmd_lift("7/2", twist=3)["results"]["longitude"]
    for key in ("omega", "gamma_residual"):
        assert abs(base[key] - twisted[key]) <= 1e-9
    assert abs(complex(*base["gamma"]) - complex(*twisted["gamma"])) <= 1e-9


def test_lift_twist_shows_in_raw_filling(capsys):
    code, doc = run_json(capsys, "lift", "--slope", "7/2", "--twist", "3")
    assert code == 0
    assert doc["results"]["filling"]["raw_omega"] == pytest.approx(-2 * 3.141592653589793 * 21, abs=1e-6)


def test_lift_text_output(capsys):
    code, out, _ = run_cli(capsys, "lift", "--slope", "5/2")
    assert code == 0
    assert "wood_window" in out


# -- g-curve ------------------------------------------------------------------

def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_gcurve_five_points(capsys):
    code, out, _ = run_cli(capsys, "g-curve", "--min", "1e-4", "--max", "1e4", "--points", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["s", "t", "A", "B", "g"]
    assert len(rows) == 5
    assert rows[0][0] == 1e-4 and rows[-1][0] == 1e4
    assert 0 < rows[0][4] < 4 and 0 < rows[-1][4] < 4


def test_gcurve_empty_range(capsys):
    code, _, _ = run_cli(capsys, "g-curve", "--min", "1", "--max", "1", "--points", "2")
    assert code == 2


def test_gcurve_one_point_rejected(capsys):
    code, _, _ = run_cli(capsys, "g-curve", "--min", "1", "--max", "2", "--points", "1")
    assert code == 2


def test_gcurve_wide(capsys):
    code, out, _ = run_cli(capsys, "g-curve", "--min", "1e-6", "--max", "1e6", "--points", "101")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 101
    s = [r[0] for r in rows]
    assert all(a < b for a, b in zip(s, s[1:]))


def test_gcurve_full_precision(capsys):
    _, out, _ = run_cli(capsys, "g-curve", "--min", "0.5", "--max", "2", "--points", "3")
    _, rows = parse_csv(out)
    assert rows[1][0] == 1.0
    assert rows[1][4] == pytest.approx(1.5955540215125569179, rel=1e-15)


def test_gcurve_json(capsys):
    code, doc = run_json(capsys, "g-curve", "--min", "1", "--max", "2", "--points", "3")
    assert code == 0
    assert doc["results"]["columns"] == ["s", "t", "A", "B", "g"]


def test_csv_rejected_elsewhere(capsys):
    code, _, err = run_cli(capsys, "verify", "--s", "1", "--format", "csv")
    assert code == 2
    assert "g-curve" in err


# -- limits -------------------------------------------------------------------

def test_limits(capsys):
    code, out, _ = run_cli(capsys, "limits")
    assert code == 0
    assert out.count("[PASS]") == 9


def test_limits_json(capsys):
    code, doc = run_json(capsys, "limits")
    assert code == 0
    assert doc["schema_version"] == "1"
    assert len(doc["results"]) == 9
    assert all(r["converged"] for r in doc["results"])


def test_limits_small_grid(capsys):
    code, _, err = run_cli(capsys, "limits", "--grid-points", "8")
    assert code == 2
    assert "16" in err


def test_limits_unreachable_tolerance(capsys):
    code, _, _ = run_cli(capsys, "limits", "--tol", "1e-14")
    assert code == 1


# -- documents ----------------------------------------------------------------

@pytest.mark.parametrize("doc", [
    cmd_verify(2.0),
    cmd_solve("3/2"),
    cmd_lift("1"),
], ids=["verify", "solve", "lift"])
def test_json_round_trip(doc):
    text = json.dumps(doc)
    assert json.loads(text) == doc
    assert json.dumps(json.loads(text)) == text


def test_commands_are_deterministic(capsys):
    for argv in (["verify", "--s", "0.3"], ["solve", "--slope", "5/2"], ["limits"]):
        first = run_cli(capsys, *argv, "--format", "json")
        second = run_cli(capsys, *argv, "--format", "json")
        assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "knot52", "solve", "--slope", "3", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["s_star"] == pytest.approx(5**0.5, rel=1e-12)


def test_version(capsys):
    code, out, _ = run_cli(capsys, "--version")
    assert code == 0
    assert "0.1.0" in out
