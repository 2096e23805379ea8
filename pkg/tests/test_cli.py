import json
import math
import subprocess
import sys

import pytest

from besselsum.cli import CSV_HEADER, main, parse_sweep_config, run_sweep, to_json, CliRefusal
from besselsum.expansions import closed_form_S_half_p1


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


POINT = ["--nu", "0", "--p", "1", "--a", "0.5", "--x", "1"]


class TestEval:
    def test_auto_closed_form(self, capsys):
        code, doc = run_json(capsys, "eval", "--kind", "S", "--nu", "-0.5", "--p", "1", "--a", "0.1", "--x", "1", "--method", "auto")
        assert code == 0
        assert doc["value"] == pytest.approx(closed_form_S_half_p1(0.1, 1.0), rel=1e-12)
        assert set(doc) == {"value", "error_estimate", "terms_used", "method", "convergence_class"}

    def test_single_term_dominance(self, capsys):
        code, doc = run_json(capsys, "eval", "--nu", "0", "--p", "2", "--a", "10", "--x", "1e-12", "--method", "expansion")
        assert code == 0
        assert doc["value"] == pytest.approx(math.exp(-10), rel=1e-10)

    def test_domain_error_exit_2(self, capsys):
        code, doc = run_json(capsys, "eval", "--kind", "T", "--nu", "0", "--p", "1", "--a", "1", "--x", "1.5")
        assert code == 2
        assert doc["error"] == "DomainError" and "x" in doc["detail"]

    def test_t_beyond_threshold_uses_general_route(self, capsys):
        code, doc = run_json(capsys, "eval", "--kind", "T", "--nu", "0", "--p", "1", "--a", "4.5", "--x", "0.5", "--method", "expansion")
        assert code == 0 and doc["convergence_class"] == "Asymptotic"

    def test_expansion_refusal(self, capsys):
        code, doc = run_json(capsys, "eval", "--nu", "0", "--p", "4", "--a", "0.5", "--x", "0.5", "--method", "expansion")
        assert code == 2 and doc["error"] == "DomainError"

    def test_key_set_stable(self, capsys):
        _, a = run_json(capsys, "eval", *POINT, "--method", "direct")
        _, b = run_json(capsys, "eval", *POINT, "--method", "expansion")
        assert set(a) == set(b)

    def test_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("BESSELSUM_TOL", "1e-4")
        _, loose = run_json(capsys, "eval", *POINT, "--method", "direct")
        monkeypatch.delenv("BESSELSUM_TOL")
        _, tight = run_json(capsys, "eval", *POINT, "--method", "direct")
        assert loose["terms_used"] < tight["terms_used"]

    def test_bad_env_tolerance(self, capsys, monkeypatch):
        monkeypatch.setenv("BESSELSUM_TOL", "abc")
        code, doc = run_json(capsys, "eval", *POINT)
        assert code == 2 and doc["error"] == "CliRefusal"


class TestCompare:
    def test_convergent(self, capsys):
        code, doc = run_json(capsys, "compare", "--nu", "0", "--p", "0.5", "--a", "0.05", "--x", "1")
        assert code == 0 and doc["within_tolerance"] is True

    def test_asymptotic(self, capsys):
        _, doc = run_json(capsys, "compare", "--nu", "0", "--p", "1.5", "--a", "0.01", "--x", "0.5")
        assert doc["abs_diff"] <= 10 * doc["expansion"]["error_estimate"] + 10 * doc["direct"]["error_estimate"]

    def test_poisson_jacobi(self, capsys):
        _, doc = run_json(capsys, "compare", "--nu", "-0.5", "--p", "2", "--a", "1", "--x", "1", "--tol", "1e-12")
        assert doc["within_tolerance"] is True
        assert set(doc) == {"direct", "expansion", "abs_diff", "within_tolerance"}


class TestSweep:
    def test_grid_rows(self, capsys):
        code, out = run(capsys, "sweep", "--nu", "0", "--p", "1", "--a", "0.1", "0.5", "1", "--x", "0.3", "1", "2", "--method", "both")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == ",".join(CSV_HEADER)
        assert len(lines) == 19

    def test_error_row_isolated(self, capsys):
        code, out = run(capsys, "sweep", "--a", "0.1", "-1", "0.2", "--x", "0.5", "--method", "direct")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 4
        assert ",error," in lines[2] and "DomainError" in lines[2]
        assert ",Direct," in lines[1] and ",Direct," in lines[3]

    def test_config_file_and_json(self, capsys, tmp_path):
        cfg = tmp_path / "grid.txt"
        cfg.write_text("# cost sweep\nnu=0\np=1\nx=1\na=0.1\na=0.01\nmethod=direct\nformat=json\n")
        code, out = run(capsys, "sweep", "--config", str(cfg))
        rows = json.loads(out)
        assert code == 0 and [r["a"] for r in rows] == [0.1, 0.01]
        assert rows[1]["terms_used"] > 5 * rows[0]["terms_used"]

    def test_parallel_order_matches_serial(self):
        spec = parse_sweep_config("a=0.3\na=0.1\na=0.05\nx=0.5\nx=1\nmethod=direct\njobs=2")
        par = run_sweep(spec)
        spec.jobs = 1
        assert par == run_sweep(spec)

    def test_bad_config(self):
        with pytest.raises(CliRefusal):
            parse_sweep_config("a=abc")
        with pytest.raises(CliRefusal):
            parse_sweep_config("colour=blue")
        with pytest.raises(CliRefusal):
            parse_sweep_config("kind=Q")


class TestBench:
    def test_p1_speedup_and_exponent(self, capsys):
        code, doc = run_json(capsys, "bench", "--p", "1", "--nu", "0", "--x", "1", "--a-list", "1e-2", "1e-3", "1e-4")
        s = doc["summary"]
        assert code == 0
        assert s["speedup"] >= 100
        assert s["direct_cost_exponent"] == pytest.approx(-1.0, abs=0.1)

    def test_p2(self, capsys):
        _, doc = run_json(capsys, "bench", "--p", "2", "--nu", "0", "--x", "0.5", "--a-list", "1e-1", "1e-2", "1e-3")
        exp_rows = [r for r in doc["records"] if r["method"] == "expansion"]
        assert all(r["terms_used"] <= 5 for r in exp_rows)
        assert doc["summary"]["direct_cost_exponent"] == pytest.approx(-0.5, abs=0.1)


class TestVerifyAsymptotics:
    def test_exact_half_order(self, capsys):
        _, doc = run_json(capsys, "verify-asymptotics", "--nu", "-0.5", "--x", "1", "--k-list", *map(str, range(1, 31)))
        assert doc["pass"] is True

    def test_monotone(self, capsys):
        _, doc = run_json(capsys, "verify-asymptotics", "--nu", "0", "--x", "1")
        assert doc["pass"] is True

    def test_positive_mode(self, capsys):
        _, doc = run_json(capsys, "verify-asymptotics", "--mode", "pos", "--nu", "0", "--x", "0.5", "--k-list", "25", "50", "100")
        c100 = [c for c in doc["checks"] if c["k"] == 100][0]
        assert abs(c100["ratio"] - 1) <= 5 / 100 and doc["pass"]

    def test_remainder(self, capsys):
        _, doc = run_json(capsys, "verify-asymptotics", "--mode", "remainder", "--nu", "0", "--x", "1", "--t-step", "1")
        assert doc["pass"] is True


def test_json_round_trip_digits():
    v = 0.1 + 0.2
    assert float(json.loads(to_json({"v": v}))["v"]) == v
    assert to_json({"v": math.inf}) == '{\n  "v": null\n}'


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "besselsum", "eval", *POINT, "--method", "direct"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["method"] == "Direct"
