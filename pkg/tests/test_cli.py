"""End-to-end tests of the command-line interface."""

import math

import pytest

from annulus_harmonics import cli
from annulus_harmonics import figures


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestReportCommands:
    def test_bound_riemann_row(self, capsys):
        code, out, _ = run(capsys, "bound", "--id", "riemann", "--tau", "0.2",
                           "--sigma", "0.5", "--r1", "0.9")
        assert code == 0
        header, rows = rows_of(out)
        assert header[:3] == ["bound_id", "lhs", "rhs"]
        assert rows[0][0] == "sphere_annulus"
        assert rows[0][3] == "true"

    def test_map_identity_eval(self, capsys):
        code, out, _ = run(capsys, "map", "--surface", "hyperbolic", "--c", "0",
                           "--sigma", "1", "--tau", "0.3", "--eval", "0.5")
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][1]) == pytest.approx(0.5, abs=1e-12)

    def test_verify_cylinder_gauss(self, capsys):
        code, out, _ = run(capsys, "verify", "--case", "cylinder-gauss")
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][2]) < 1e-12

    def test_metric_density(self, capsys):
        code, out, _ = run(capsys, "metric", "--kind", "sphere", "--op",
                           "density", "--t", "1.0")
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][2]) == pytest.approx(1.0)

    def test_metric_profile_g(self, capsys):
        code, out, _ = run(capsys, "metric", "--kind", "sphere", "--op",
                           "profile", "--rho", str(math.pi / 2.0))
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][2]) == pytest.approx(1.0, rel=1e-12)

    def test_map_inner_radius_report(self, capsys):
        code, out, _ = run(capsys, "map", "--surface", "sphere", "--extremal",
                           "--tau", "0.999", "--sigma", "1.0")
        assert code == 0
        _, rows = rows_of(out)
        assert float(rows[0][4]) == pytest.approx(0.207879494634958735, rel=1e-9)

    def test_bound_f_pair(self, capsys):
        code, out1, _ = run(capsys, "bound", "--id", "f1", "--s", "0.25")
        assert code == 0
        code, out2, _ = run(capsys, "bound", "--id", "f2", "--s", "0.25")
        assert code == 0
        v1 = float(rows_of(out1)[1][0][1])
        v2 = float(rows_of(out2)[1][0][1])
        assert v1 >= v2

    def test_verify_isometry_rows(self, capsys):
        code, out, _ = run(capsys, "verify", "--case", "isometry", "--grid", "32",
                           "--surface", "sphere", "--extremal", "--tau", "0.4",
                           "--sigma", "0.9", "--count", "3")
        assert code == 0
        _, rows = rows_of(out)
        assert len(rows) == 3
        assert all(float(r[6]) <= 2.0 for r in rows)


class TestDeterminismAndOutput:
    def test_byte_identical_runs(self, capsys):
        _, out1, _ = run(capsys, "figure", "--id", "4", "--points", "7")
        _, out2, _ = run(capsys, "figure", "--id", "4", "--points", "7")
        assert out1 == out2

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "fig.csv"
        code, out, _ = run(capsys, "figure", "--id", "2", "--points", "4",
                           "--out", str(target))
        assert code == 0
        assert out == ""
        text = target.read_text()
        assert text.startswith("tau,h_extremal,h_lower\n")
        assert len(text.strip().splitlines()) == 5

    def test_fifteen_significant_digits(self, capsys):
        _, out, _ = run(capsys, "bound", "--id", "kalaj", "--r1", "0.5")
        value = out.strip().splitlines()[1].split(",")[1]
        assert len(value.replace(".", "").replace("-", "").lstrip("0")) >= 14


class TestExitCodes:
    def test_usage_error_is_one(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["bound"])  # missing --id
        assert exc.value.code == 1

    def test_unknown_flag_is_one(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["figure", "--id", "1", "--bogus"])
        assert exc.value.code == 1

    def test_parameter_error_is_one(self, capsys):
        code, _, err = run(capsys, "map", "--surface", "sphere", "--c", "0",
                           "--tau", "0.7", "--sigma", "0.5")
        assert code == 1
        assert "error" in err

    def test_quadrature_error_is_one(self, capsys):
        code, _, err = run(capsys, "metric", "--kind", "hyperbolic_disk",
                           "--op", "distance", "--a", "0", "--b", "1")
        assert code == 1

    def test_ordering_violation_is_two(self, capsys, monkeypatch):
        monkeypatch.setattr(figures, "f2", lambda s: 1.5)
        code, _, err = run(capsys, "figure", "--id", "4", "--points", "3")
        assert code == 2
        assert "ordering violation" in err
