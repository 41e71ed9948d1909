import csv
import json
from fractions import Fraction

import pytest

from bdk.cli import PolynomialParseError, main, parse_polynomial
from bdk.combinat import parse_rational


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_closed_value(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--d", "1", "--m", "1", "--n", "1",
                               "--x", "0", "--y", "0", "--form", "closed")
        assert code == 0
        assert out.strip() == "4/3"

    def test_constant_kernel_bivariate(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--d", "2", "--m", "0", "--n", "3",
                               "--x", "1/3,1/3", "--y", "1/4,1/4", "--form", "closed")
        assert code == 0
        assert out.strip() == "2"

    def test_definition_matches_closed(self, capsys):
        args = ["--d", "2", "--m", "2", "--n", "1", "--x", "1/5,1/5", "--y", "1/7,2/7"]
        _, closed_out, _ = run_cli(capsys, "eval", *args, "--form", "closed")
        _, def_out, _ = run_cli(capsys, "eval", *args, "--form", "definition")
        assert closed_out == def_out

    def test_float_echo(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--d", "1", "--m", "1", "--n", "1",
                               "--x", "0", "--y", "0", "--float")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[0] == "4/3"
        assert lines[1] == f"{4 / 3:.17g}"

    def test_univariate_form_value(self, capsys):
        code, out, _ = run_cli(capsys, "eval", "--d", "1", "--m", "1", "--n", "1",
                               "--x", "0", "--y", "0", "--form", "univariate")
        assert code == 0
        assert out.strip() == "4/3"

    def test_legendre_form_matches_closed(self, capsys):
        args = ["--d", "1", "--m", "3", "--n", "2", "--x", "1/3", "--y", "4/7"]
        _, legendre_out, _ = run_cli(capsys, "eval", *args, "--form", "legendre")
        _, closed_out, _ = run_cli(capsys, "eval", *args, "--form", "closed")
        assert legendre_out == closed_out

    def test_univariate_forms_require_d1(self, capsys):
        for form in ("univariate", "legendre"):
            code, _, err = run_cli(capsys, "eval", "--d", "2", "--m", "1", "--n", "1",
                                   "--x", "0,0", "--y", "0,0", "--form", form)
            assert code == 2
            assert "requires --d 1" in err

    def test_malformed_rational_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--d", "1", "--m", "1", "--n", "1",
                               "--x", "0.5", "--y", "0")
        assert code == 2
        assert "rational" in err

    def test_wrong_coordinate_count(self, capsys):
        code, _, err = run_cli(capsys, "eval", "--d", "2", "--m", "1", "--n", "1",
                               "--x", "1/2", "--y", "0,0")
        assert code == 2

    def test_dump_kernel(self, capsys, tmp_path):
        path = tmp_path / "kernel.json"
        code, out, _ = run_cli(capsys, "eval", "--d", "1", "--m", "1", "--n", "1",
                               "--x", "0", "--y", "0", "--dump-kernel", str(path))
        assert code == 0
        obj = json.loads(path.read_text())
        assert obj["form"] == "canonical"
        assert obj["d"] == 1
        assert len(obj["terms"]) == 4

    def test_unknown_flag_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "eval", "--bogus", "1")
        assert code == 2


class TestCoeffs:
    def test_example(self, capsys):
        code, out, _ = run_cli(capsys, "coeffs", "--d", "1", "--m", "1", "--n", "1")
        lines = out.strip().splitlines()
        assert code == 0
        assert json.loads(lines[0]) == ["2/3", "1/3"]
        assert lines[1] == "1"

    def test_degree_zero(self, capsys):
        code, out, _ = run_cli(capsys, "coeffs", "--d", "2", "--m", "0", "--n", "4")
        lines = out.strip().splitlines()
        assert code == 0
        assert json.loads(lines[0]) == ["1"]
        assert lines[1] == "1"

    def test_sum_is_always_one(self, capsys):
        for m, n, d in [(3, 5, 1), (4, 4, 2), (2, 6, 3)]:
            _, out, _ = run_cli(capsys, "coeffs", "--d", str(d), "--m", str(m), "--n", str(n))
            lines = out.strip().splitlines()
            assert lines[1] == "1"
            assert sum(parse_rational(c) for c in json.loads(lines[0])) == 1


class TestPolynomialGrammar:
    def test_simple_variable(self):
        p = parse_polynomial("x1", 1)
        assert p.terms == {(1,): Fraction(1)}

    def test_full_term(self):
        p = parse_polynomial("2/3*x1^2*x2", 2)
        assert p.terms == {(2, 1): Fraction(2, 3)}

    def test_signs_and_constants(self):
        p = parse_polynomial("x1 - x2 + 1/2", 2)
        assert p.terms == {(1, 0): Fraction(1), (0, 1): Fraction(-1), (0, 0): Fraction(1, 2)}

    def test_leading_minus(self):
        assert parse_polynomial("-x1", 1).terms == {(1,): Fraction(-1)}

    def test_repeated_variable_multiplies(self):
        assert parse_polynomial("x1*x1", 1).terms == {(2,): Fraction(1)}

    def test_error_carries_position(self):
        with pytest.raises(PolynomialParseError) as exc:
            parse_polynomial("x1 + @", 1)
        assert exc.value.position == 5

    def test_out_of_range_variable(self):
        with pytest.raises(PolynomialParseError):
            parse_polynomial("x3", 2)

    def test_dangling_operator(self):
        with pytest.raises(PolynomialParseError):
            parse_polynomial("x1 +", 1)

    def test_missing_star(self):
        with pytest.raises(PolynomialParseError):
            parse_polynomial("2 x1", 1)


class TestApply:
    def test_first_moment_example(self, capsys):
        code, out, _ = run_cli(capsys, "apply", "--d", "1", "--degrees", "1",
                               "--poly", "x1")
        assert code == 0
        obj = json.loads(out)
        assert obj == {"d": 1, "terms": [{"coef": "1/3", "exp": [0]},
                                         {"coef": "1/3", "exp": [1]}]}

    def test_constant_preserved(self, capsys):
        code, out, _ = run_cli(capsys, "apply", "--d", "2", "--degrees", "3",
                               "--poly", "1")
        assert code == 0
        assert json.loads(out)["terms"] == [{"coef": "1", "exp": [0, 0]}]

    def test_composition_order_is_irrelevant(self, capsys):
        _, out_a, _ = run_cli(capsys, "apply", "--d", "1", "--degrees", "2,3", "--poly", "x1")
        _, out_b, _ = run_cli(capsys, "apply", "--d", "1", "--degrees", "3,2", "--poly", "x1")
        assert out_a == out_b

    def test_parse_error_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "apply", "--d", "1", "--degrees", "1",
                               "--poly", "x1 + $")
        assert code == 2
        assert "position" in err


class TestTable:
    def test_corner_values_d1(self, capsys, tmp_path):
        path = tmp_path / "t.csv"
        code, _, _ = run_cli(capsys, "table", "--d", "1", "--m", "1", "--n", "1",
                             "--grid", "2", "--out", str(path))
        assert code == 0
        rows = list(csv.DictReader(path.open()))
        values = {(r["x1"], r["y1"]): float(r["K"]) for r in rows}
        third = float(Fraction(4, 3))
        two_thirds = float(Fraction(2, 3))
        assert values == {
            ("0.0", "0.0"): third, ("0.0", "1.0"): two_thirds,
            ("1.0", "0.0"): two_thirds, ("1.0", "1.0"): third,
        }

    def test_degree_zero_kernel_is_flat(self, capsys, tmp_path):
        path = tmp_path / "flat.csv"
        run_cli(capsys, "table", "--d", "1", "--m", "0", "--n", "0",
                "--grid", "3", "--out", str(path))
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == 9
        assert all(float(r["K"]) == 1.0 for r in rows)

    def test_row_count_d1(self, capsys, tmp_path):
        path = tmp_path / "n.csv"
        run_cli(capsys, "table", "--d", "1", "--m", "2", "--n", "1",
                "--grid", "4", "--out", str(path))
        assert len(list(csv.DictReader(path.open()))) == 16

    def test_d2_emits_only_simplex_points(self, capsys, tmp_path):
        path = tmp_path / "d2.csv"
        run_cli(capsys, "table", "--d", "2", "--m", "1", "--n", "1",
                "--grid", "3", "--out", str(path))
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == 36  # 6 admissible grid points, squared
        for r in rows:
            assert float(r["x1"]) + float(r["x2"]) <= 1.0 + 1e-12
            assert float(r["y1"]) + float(r["y2"]) <= 1.0 + 1e-12

    def test_unsupported_dimension(self, capsys):
        code, _, err = run_cli(capsys, "table", "--d", "3", "--m", "1", "--n", "1",
                               "--grid", "2")
        assert code == 2

    def test_unwritable_path(self, capsys):
        code, _, err = run_cli(capsys, "table", "--d", "1", "--m", "1", "--n", "1",
                               "--grid", "2", "--out", "/nonexistent-dir/t.csv")
        assert code == 2
        assert "cannot write" in err


class TestVerifyCommand:
    def test_trivial_run_exits_zero(self, capsys, tmp_path):
        path = tmp_path / "report.json"
        code, _, err = run_cli(capsys, "verify", "--d", "1", "--max-degree", "0",
                               "--report", str(path))
        assert code == 0
        report = json.loads(path.read_text())
        assert report["schema"] == "bdk-report/1"
        assert report["summary"]["failed"] == 0
        assert "failed" in err

    def test_report_to_stdout_by_default(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--d", "1", "--max-degree", "0")
        assert code == 0
        assert json.loads(out)["complete"] is True

    def test_self_test_corruption_exits_one_with_witness(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        code, _, _ = run_cli(capsys, "verify", "--d", "1", "--max-degree", "1",
                             "--self-test-corrupt", "--report", str(path))
        assert code == 1
        report = json.loads(path.read_text())
        failing = [c for c in report["checks"] if not c["passed"]]
        assert failing
        assert all(c["witness"] for c in failing)

    def test_dimension_without_default_cap_needs_max_degree(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--d", "4")
        assert code == 2
        assert "--max-degree" in err

    def test_byte_identical_bodies_for_same_seed(self, capsys, tmp_path):
        bodies = []
        for name in ("a.json", "b.json"):
            path = tmp_path / name
            code, _, _ = run_cli(capsys, "verify", "--d", "1", "--max-degree", "2",
                                 "--seed", "13", "--report", str(path))
            assert code == 0
            obj = json.loads(path.read_text())
            obj.pop("total_ms", None)
            for check in obj["checks"]:
                check.pop("wall_ms", None)
            bodies.append(json.dumps(obj, sort_keys=True))
        assert bodies[0] == bodies[1]

    def test_time_budget_marks_incomplete(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--d", "1", "--max-degree", "1",
                                 "--time-budget", "0.0")
        report = json.loads(out)
        assert report["complete"] is False
        assert "INCOMPLETE" in err


    def test_restricting_dimensions_skips_univariate_families(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--d", "2", "--max-degree", "1")
        assert code == 0
        names = {c["name"] for c in json.loads(out)["checks"]}
        assert not any(name.startswith(("univariate", "threefold", "legendre"))
                       for name in names)
        assert "twofold_closed_equals_definition" in names


class TestTopLevel:
    def test_no_command_is_usage_error(self, capsys):
        assert run_cli(capsys)[0] == 2

    def test_unknown_command(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 2

    def test_factorial_cache_env_override(self):
        import subprocess
        import sys

        out = subprocess.run(
            [sys.executable, "-c",
             "from bdk.combinat import factorial, factorial_cache_bound; "
             "print(factorial_cache_bound()); print(factorial(40))"],
            capture_output=True, text=True, check=True,
            env={"BDK_MAX_FACTORIAL": "32", "PATH": "/usr/bin:/bin"},
        )
        bound, value = out.stdout.split()
        assert bound == "32"
        import math
        assert int(value) == math.factorial(40)
