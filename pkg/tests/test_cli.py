"""Command line behaviour: exit codes, report shape, determinism."""

import json

import pytest

from finslerkit.checks import check_ids
from finslerkit.cli import main


def run_verify(tmp_path, *extra, metric="euclidean2", checks="struct.symmetry"):
    out = tmp_path / "report.json"
    code = main(
        [
            "verify",
            "--metric",
            metric,
            "--checks",
            checks,
            "--points",
            "4",
            "--seed",
            "3",
            "--out",
            str(out),
            *extra,
        ]
    )
    return code, out


class TestVerify:
    def test_passing_run_exits_zero(self, tmp_path, capsys):
        code, out = run_verify(tmp_path, checks="struct.spray_defect,struct.symmetry")
        assert code == 0
        report = json.loads(out.read_text())
        ids = [c["id"] for c in report["checks"]]
        assert ids == sorted(ids)
        assert {c["verdict"] for c in report["checks"]} <= {"PASS", "REPORT-ONLY"}
        cfg = report["config"]
        assert cfg["metric"] == "euclidean2"
        assert cfg["points"] == 4
        assert cfg["seed"] == 3
        captured = capsys.readouterr()
        assert "PASS" in captured.err

    def test_all_checks_on_flat_metric(self, tmp_path):
        code, out = run_verify(tmp_path, checks="all")
        report = json.loads(out.read_text())
        assert len(report["checks"]) == len(check_ids())
        verdicts = {c["id"]: c["verdict"] for c in report["checks"]}
        assert verdicts["curv.flatness"] == "PASS"
        assert code == 0

    def test_curved_metric_fails_flatness(self, tmp_path):
        code, out = run_verify(tmp_path, metric="sphere2", checks="curv.flatness")
        assert code == 1
        report = json.loads(out.read_text())
        rec = report["checks"][0]
        assert rec["verdict"] == "FAIL"
        assert rec["witness"] is not None

    def test_report_only_does_not_fail_the_run(self, tmp_path):
        code, out = run_verify(
            tmp_path, metric="sphere2", checks="prop2.14.lie,struct.symmetry"
        )
        assert code == 0
        report = json.loads(out.read_text())
        verdicts = {c["id"]: c["verdict"] for c in report["checks"]}
        assert verdicts["prop2.14.lie"] == "REPORT-ONLY"

    def test_reports_are_byte_identical(self, tmp_path):
        code1, out1 = run_verify(tmp_path, checks="all")
        blob1 = out1.read_bytes()
        out1.unlink()
        code2, out2 = run_verify(tmp_path, checks="all")
        assert blob1 == out2.read_bytes()

    def test_metric_file_input(self, tmp_path):
        spec = {
            "family": "randers",
            "base": {"family": "riemannian", "preset": "sphere2"},
            "b": [0.1, 0.0],
        }
        mfile = tmp_path / "metric.json"
        mfile.write_text(json.dumps(spec))
        code, out = run_verify(
            tmp_path, metric=str(mfile), checks="struct.homogeneity,prop.randers"
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert "randers" in report["config"]["metric_name"]


class TestUsageErrors:
    def test_unknown_metric(self, tmp_path):
        code, _ = run_verify(tmp_path, metric="banana2")
        assert code == 2

    def test_unknown_check_id(self, tmp_path):
        code, _ = run_verify(tmp_path, checks="struct.nonsense")
        assert code == 2

    def test_tolerance_must_be_below_floor(self, tmp_path):
        code, _ = run_verify(tmp_path, "--tol", "1e-2", "--floor", "1e-3")
        assert code == 2

    def test_points_must_be_positive(self, tmp_path):
        code, _ = run_verify(tmp_path, "--points", "0")
        assert code == 2

    def test_bad_point_syntax_for_eval(self):
        code = main(
            ["eval", "--metric", "euclidean2", "--at", "x=0.1", "--object", "g"]
        )
        assert code == 2


class TestListChecks:
    def test_every_registered_check_is_listed(self, capsys):
        assert main(["list-checks"]) == 0
        text = capsys.readouterr().out
        for check_id in check_ids():
            assert check_id in text


class TestEval:
    def test_metric_tensor_print(self, capsys):
        code = main(
            [
                "eval",
                "--metric",
                "euclidean2",
                "--at",
                "x=0.0,0.0;y=1.0,0.0",
                "--object",
                "g",
            ]
        )
        assert code == 0
        text = capsys.readouterr().out
        assert "g =" in text

    def test_scalar_curvature_of_the_sphere(self, capsys):
        code = main(
            [
                "eval",
                "--metric",
                "sphere2",
                "--at",
                "x=0.25,-0.4;y=0.8,0.5",
                "--object",
                "Sc",
            ]
        )
        assert code == 0
        text = capsys.readouterr().out
        value = float(text.strip().splitlines()[-1])
        assert value == pytest.approx(2.0, abs=1e-9)
