import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from spikedosc.cli import main
from spikedosc.sums import closed_sum_alpha2

from . import oracles


def run(*args, env=None):
    try:
        runner = CliRunner(mix_stderr=False)
    except TypeError:  # click >= 8.2 always separates the streams
        runner = CliRunner()
    return runner.invoke(main, [str(a) for a in args], env=env)


def rows(result):
    lines = [ln for ln in result.stdout.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestSum:
    def test_alpha2_closed(self):
        r = run("sum", "--alpha", 2, "--gamma", 1.5, "--x", 1, "--method", "closed")
        assert r.exit_code == 0, r.output
        (row,) = rows(r)
        assert float(row["closed"]) == pytest.approx(oracles.S2_AT_1_5_1, abs=1e-10)
        assert row["strict"] == "1" and row["weak"] == "1"
        assert row["partial"] == "" and row["error"] == ""

    def test_alpha4_all_methods(self):
        r = run("sum", "--alpha", 4, "--gamma", 3, "--x", 1)
        assert r.exit_code == 0, r.output
        (row,) = rows(r)
        assert float(row["closed"]) == pytest.approx(1.9227843351, abs=1e-10)
        assert float(row["partial"]) == pytest.approx(float(row["closed"]), abs=1e-3)
        assert float(row["contour"]) == pytest.approx(float(row["closed"]), abs=1e-5)
        assert int(row["partial_terms"]) > 0

    def test_seventeen_digits(self):
        r = run("sum", "--alpha", 2, "--gamma", 1.5, "--x", 1, "--method", "closed")
        value = closed_sum_alpha2(1.5, 1.0)
        assert r.stdout.splitlines()[1].split(",")[3] == f"{value:.17g}"
        assert float(f"{value:.17g}") == value

    def test_divergence_at_origin(self):
        r = run("sum", "--alpha", 2, "--gamma", 1.5, "--x", 0)
        assert r.exit_code == 2
        assert "diverges at x = 0" in r.stderr

    def test_grid(self):
        r = run("sum", "--alpha", 2, "--gamma", 3, "--x-min", 0.5, "--x-max", 2, "--x-steps", 4,
                "--method", "closed")
        assert [float(row["x"]) for row in rows(r)] == [0.5, 1.0, 1.5, 2.0]

    def test_row_error_keeps_other_rows(self):
        # the contour path needs c > x^2/2; x = 2 fails with c = 1.5 but x = 1 succeeds
        r = run("sum", "--alpha", 2, "--gamma", 1.5, "--x", 1, "--x", 2, "--method", "contour",
                "--c", 1.5)
        assert r.exit_code == 0
        good, bad = rows(r)
        assert good["error"] == "" and good["contour"] != ""
        assert bad["error"].startswith("contour:") and bad["contour"] == ""

    def test_no_closed_form_for_odd_alpha(self):
        r = run("sum", "--alpha", 3, "--gamma", 2.5, "--x", 1, "--method", "closed")
        assert r.exit_code == 0
        (row,) = rows(r)
        assert row["closed"] == "" and "closed" in row["error"]

    def test_invalid_parameters(self):
        assert run("sum", "--alpha", -1, "--gamma", 1.5, "--x", 1).exit_code == 2
        assert run("sum", "--alpha", 2, "--gamma", 1.5).exit_code == 2
        assert run("sum", "--alpha", 2, "--gamma", 1.5, "--x", 1, "--method", "bogus").exit_code == 2


class TestContour:
    def test_value(self):
        r = run("contour", "--alpha", 2, "--gamma", 1.5, "--x", 1)
        assert r.exit_code == 0, r.output
        (row,) = rows(r)
        assert float(row["contour"]) == pytest.approx(oracles.S2_AT_1_5_1, abs=1e-6)
        assert row["converged"] == "1" and float(row["c"]) == 1.0

    def test_precondition(self):
        assert run("contour", "--alpha", 4, "--gamma", 2, "--x", 1).exit_code == 2


class TestWavefunction:
    def test_endpoint(self):
        r = run("wavefunction", "--A", 0, "--B", 1, "--alpha", 2, "--lambda", 0.5, "--x", 1)
        assert r.exit_code == 0, r.output
        (row,) = rows(r)
        assert float(row["psi1"]) == pytest.approx(oracles.FIRST_ORDER_AT_1, abs=1e-12)
        assert float(row["psi0"]) == pytest.approx(oracles.PSI0_AT_1, rel=1e-14)

    def test_lambda_column(self):
        r = run("wavefunction", "--lambda", 0.37, "--x-min", 0.1, "--x-max", 3, "--x-steps", 7)
        for row in rows(r):
            assert float(row["lambda_psi1"]) == 0.37 * float(row["psi1"])

    def test_near_origin_row(self):
        (row,) = rows(run("wavefunction", "--x", 1e-3))
        assert float(row["psi1"]) == pytest.approx(oracles.FIRST_ORDER_AT_1E_3, rel=1e-12)

    def test_general_alpha_needs_flag(self):
        assert run("wavefunction", "--A", 2, "--alpha", 3, "--x", 1).exit_code == 2
        r = run("wavefunction", "--A", 2, "--alpha", 3, "--x", 1, "--contour")
        assert r.exit_code == 0 and math.isfinite(float(rows(r)[0]["psi1"]))

    def test_b_warning(self):
        r = run("wavefunction", "--B", 2, "--x", 1)
        assert r.exit_code == 0 and "warning" in r.stderr

    def test_invalid_model(self):
        assert run("wavefunction", "--B", 0, "--x", 1).exit_code == 2
        assert run("wavefunction", "--alpha", 4, "--x", 1).exit_code == 2


class TestMatrix:
    def test_single_entry(self):
        r = run("matrix", "--size", 1, "--lambda", 0.1)
        assert r.exit_code == 0
        assert float(rows(r)[0]["n0"]) == pytest.approx(3.2, rel=1e-15)

    def test_symmetry_line(self):
        r = run("matrix", "--size", 5)
        last = r.stdout.splitlines()[-1]
        assert last.startswith("# symmetry_deviation=")
        assert float(last.split("=")[1]) < 1e-10
        assert len(rows(r)) == 5

    def test_zero_coupling_diagonal(self):
        r = run("matrix", "--size", 4, "--lambda", 0)
        for n, row in enumerate(rows(r)):
            for k in range(4):
                assert float(row[f"n{k}"]) == (2 * (2 * n + 1.5) if k == n else 0.0)

    def test_pole_adjacent(self):
        assert run("matrix", "--alpha", 3).exit_code == 2
        assert run("matrix", "--size", 0).exit_code == 2


class TestVerify:
    def test_only(self):
        r = run("verify", "--only", "lemma4-vs-alpha8")
        assert r.exit_code == 0
        (line,) = r.stdout.splitlines()
        d = json.loads(line)
        assert d["identity_name"] == "lemma4-vs-alpha8" and d["max_rel_dev"] <= 1e-11

    def test_tolerance_knob(self):
        base = ("verify", "--only", "lemma1-partial", "--max-terms", 100)
        assert run(*base).exit_code == 1
        assert run(*base, "--tolerance", "lemma1-partial=1e-1").exit_code == 0

    def test_deterministic(self):
        args = ("verify", "--only", "laguerre-kummer-bridge", "--only", "matrix-symmetry")
        assert run(*args).stdout == run(*args).stdout

    def test_seed_env(self):
        args = ("verify", "--only", "laguerre-kummer-bridge")
        a = json.loads(run(*args, env={"SPIKEDOSC_SEED": "11"}).stdout)
        b = json.loads(run(*args, "--seed", 11).stdout)
        assert a == b and a["seed"] == 11

    def test_configuration_errors(self):
        assert run("verify", "--only", "no-such").exit_code == 2
        assert run("verify", "--tolerance", "oops").exit_code == 2
        assert run("verify", "--max-terms", 0).exit_code == 2

    def test_list(self):
        r = run("verify", "--list")
        assert r.exit_code == 0 and "lemma1-partial" in r.stdout


def test_sum_output_is_byte_identical():
    args = ("sum", "--alpha", 3, "--gamma", 2.5, "--x", 0.7, "--x", 1.3)
    assert run(*args).stdout == run(*args).stdout
