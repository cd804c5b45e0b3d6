import io
import json
import subprocess
import sys

import numpy as np
import pytest

from rocdin.cli import fmt, main, parse_curve
from rocdin.metrics import report_from_json, report_to_json
from rocdin import DirectCdfRoc, EmpiricalRoc, ParametricRoc, ParseError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def scores_file(tmp_path):
    rng = np.random.default_rng(0)
    lines = ["score,label"]
    lines += [f"{x:.6f},N" for x in rng.normal(0, 1, 60)]
    lines += [f"{x:.6f},D" for x in rng.normal(1, 1, 50)]
    path = tmp_path / "scores.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestFormatting:
    @pytest.mark.parametrize(
        "value, text",
        [(0.5, "0.5"), (1 / 3, "0.333333333333"), (1439.8110935, "1439.8110935"), (float("inf"), "inf"), (-0.0, "0")],
    )
    def test_twelve_digits(self, value, text):
        assert fmt(value) == text


class TestCurveSpecs:
    def test_forms(self, scores_file):
        assert isinstance(parse_curve("direct:beta:1,3"), DirectCdfRoc)
        assert isinstance(parse_curve("uniform/beta:2,6"), ParametricRoc)
        curve = parse_curve(f"scores:{scores_file}")
        assert isinstance(curve, EmpiricalRoc) and curve.densities is not None

    @pytest.mark.parametrize("spec", ["beta:1,3", "direct:normal:0,1", "direct:gamma:2", "scores:/no/such/file"])
    def test_rejected(self, spec):
        with pytest.raises(ParseError):
            parse_curve(spec)


class TestAnalyze:
    def test_direct(self):
        code, out, _ = run("analyze", "--roc", "direct:beta:1,3")
        assert code == 0
        d = json.loads(out)
        assert d["auc"] == pytest.approx(0.75)
        assert d["kl_forward_bits"] == pytest.approx(0.623166, rel=1e-5)
        assert d["dinegentropy_bits"] == pytest.approx(1.923596, rel=1e-5)

    def test_random_test(self):
        code, out, _ = run("analyze", "--f0", "uniform", "--f1", "uniform")
        d = json.loads(out)
        assert code == 0
        assert (d["auc"], d["gini"], d["dinegentropy_bits"]) == (0.5, 0.0, 0.0)
        assert d["dominance"]["holds"]
        assert len(d["thresholds"]) == 9

    def test_parametric_dominance_violation(self):
        code, out, _ = run("analyze", "--f0", "beta:2,6", "--f1", "beta:1,3", "--points", "3")
        d = json.loads(out)
        assert code == 0 and not d["dominance"]["holds"] and d["dominance"]["violations"] > 0
        row = d["thresholds"][1]
        assert row["fpp"] == pytest.approx(1 - row["specificity"])

    def test_scores(self, scores_file):
        code, out, _ = run("analyze", "--scores", str(scores_file))
        d = json.loads(out)
        assert code == 0 and d["approximate"] is True
        assert 0.5 < d["auc"] < 1.0

    def test_round_trip(self):
        _, out, _ = run("analyze", "--roc", "direct:beta:2,6")
        report = report_from_json(out)
        assert json.loads(report_to_json(report)) == {k: v for k, v in json.loads(out).items()}

    @pytest.mark.parametrize("fmt_name", ["csv", "table"])
    def test_other_formats(self, fmt_name):
        code, out, _ = run("analyze", "--roc", "direct:beta:1,3", "--format", fmt_name)
        assert code == 0 and "dinegentropy_bits" in out and "1.92359338785" in out

    def test_needs_exactly_one_source(self):
        code, _, err = run("analyze")
        assert code == 2 and "exactly one" in err
        code, _, _ = run("analyze", "--roc", "direct:uniform", "--f0", "uniform", "--f1", "uniform")
        assert code == 2

    def test_half_pair(self):
        code, _, err = run("analyze", "--f0", "uniform")
        assert code == 2 and "--f1" in err

    def test_bad_tolerance(self):
        code, _, _ = run("analyze", "--roc", "direct:uniform", "--rel-tol", "-1")
        assert code == 2


class TestParseErrors:
    def test_malformed_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("score,label\n1,N\nx,D\n")
        code, out, err = run("analyze", "--scores", str(path))
        assert code == 2 and out == "" and "line 3" in err

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("score,label\n1,N\n2,Q\n")
        code, _, err = run("analyze", "--scores", str(path))
        assert code == 2 and "line 3" in err

    def test_empty_class(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("score,label\n1,N\n2,N\n")
        code, _, _ = run("analyze", "--scores", str(path))
        assert code == 2

    def test_bad_distribution(self):
        code, _, err = run("analyze", "--f0", "beta:0,1", "--f1", "uniform")
        assert code == 2 and err

    def test_unknown_command(self):
        code, _, _ = run("frobnicate")
        assert code == 2


class TestComputationErrors:
    def test_too_few_points_exits_1(self, tmp_path):
        path = tmp_path / "few.csv"
        path.write_text("score,label\n1,N\n2,N\n3,D\n4,D\n")
        code, out, err = run("analyze", "--scores", str(path))
        assert code == 1 and out == "" and err


class TestCompare:
    def test_crossing_curves(self):
        code, out, _ = run("compare", "direct:beta:2,6", "direct:beta:1,3")
        d = json.loads(out)
        assert code == 0
        assert (d["winner"], d["rationale"], d["auc_tie"], d["crossing_count"]) == ("A", "ByDinegentropy", True, 1)
        lo, hi = d["crossings"][0]
        assert hi - lo <= 1e-9

    def test_by_auc(self):
        _, out, _ = run("compare", "direct:beta:1,3", "uniform/uniform")
        d = json.loads(out)
        assert (d["winner"], d["rationale"]) == ("A", "ByAUC")

    def test_grid_flag(self):
        code, out, _ = run("compare", "direct:beta:2,6", "direct:beta:1,3", "--grid", "64")
        assert code == 0 and json.loads(out)["crossing_count"] == 1
        code, _, _ = run("compare", "direct:beta:2,6", "direct:beta:1,3", "--grid", "4")
        assert code == 2

    def test_needs_two_specs(self):
        code, _, _ = run("compare", "direct:beta:2,6")
        assert code == 2

    def test_scores_against_parametric(self, scores_file):
        code, out, _ = run("compare", f"scores:{scores_file}", "normal:0,1/normal:1,1", "--format", "csv")
        assert code == 0 and out.startswith("key,value\n")


class TestRocEmit:
    def test_three_points(self):
        code, out, _ = run("roc-emit", "direct:beta:1,3", "--points", "3")
        assert code == 0
        assert out == "u,sensitivity\n0,0\n0.5,0.875\n1,1\n"

    def test_parametric(self):
        _, out, _ = run("roc-emit", "uniform/uniform", "--points", "5")
        rows = [tuple(map(float, line.split(","))) for line in out.splitlines()[1:]]
        assert all(u == pytest.approx(s) for u, s in rows)

    def test_json(self):
        _, out, _ = run("roc-emit", "direct:beta:1,3", "--points", "3", "--format", "json")
        assert json.loads(out) == {"u": [0.0, 0.5, 1.0], "sensitivity": [0.0, 0.875, 1.0]}

    def test_too_few_points(self):
        code, _, _ = run("roc-emit", "direct:beta:1,3", "--points", "1")
        assert code == 2


class TestPaperRepro:
    def test_all_pass(self):
        code, out, _ = run("paper-repro")
        assert code == 0
        rows = [line for line in out.splitlines() if line.endswith(("PASS", "FAIL")) and "(" in line]
        assert len(rows) == 10 and all(r.endswith("PASS") for r in rows)
        assert out.rstrip().endswith("10/10 PASS")

    def test_json(self):
        _, out, _ = run("paper-repro", "--format", "json")
        d = json.loads(out)
        assert d["all_pass"] and len(d["rows"]) == 10

    def test_csv(self):
        _, out, _ = run("paper-repro", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "quantity,computed,target,abs_delta,rel_delta,tolerance,status"
        assert len(lines) == 11

    def test_color_only_on_tty(self, monkeypatch):
        class Tty(io.StringIO):
            def isatty(self):
                return True

        out = Tty()
        monkeypatch.delenv("ROCDIN_NO_COLOR", raising=False)
        main(["paper-repro"], out=out, err=io.StringIO())
        assert "\x1b[" in out.getvalue()
        monkeypatch.setenv("ROCDIN_NO_COLOR", "1")
        out = Tty()
        main(["paper-repro"], out=out, err=io.StringIO())
        assert "\x1b[" not in out.getvalue()

    def test_no_color_when_piped(self):
        _, out, _ = run("paper-repro")
        assert "\x1b[" not in out


class TestProcess:
    def test_module_entry_point_is_byte_stable(self):
        cmd = [sys.executable, "-m", "rocdin", "paper-repro"]
        first = subprocess.run(cmd, capture_output=True, check=False)
        second = subprocess.run(cmd, capture_output=True, check=False)
        assert first.returncode == 0
        assert first.stdout == second.stdout

    def test_usage_error_status(self):
        res = subprocess.run([sys.executable, "-m", "rocdin", "compare"], capture_output=True, check=False)
        assert res.returncode == 2 and res.stderr
