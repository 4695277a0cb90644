import json
import math

import numpy as np

from spherediv import RotationTuple, haar_sample, identity_rotation, planar_rotation
from spherediv.cli import main


def write_tuple(path, rotations):
    path.write_text(json.dumps(RotationTuple(tuple(rotations)).to_json_obj()))
    return str(path)


REPORT_KEYS = {"d", "r", "n_max", "sing_tol", "seed", "degrees", "overall", "version"}
DEGREE_KEYS = {"n", "N_n", "sigma_min_rel", "verdict"}


def check_report_schema(obj):
    assert REPORT_KEYS <= set(obj)
    for rec in obj["degrees"]:
        assert DEGREE_KEYS <= set(rec)
        assert rec["verdict"] in {"invertible", "singular", "borderline"}
    if "witness" in obj:
        assert {"n", "poles", "coeffs"} <= set(obj["witness"])
        assert "residual_max" in obj


class TestCmdTest:
    def test_identity_tuple_no_witness(self, tmp_path, capsys):
        inp = write_tuple(tmp_path / "tuple.json", [identity_rotation(3)] * 2)
        out = tmp_path / "report.json"
        code = main(["test", "--input", inp, "--n-max", "2", "--seed", "5", "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text())
        check_report_schema(obj)
        assert obj["overall"].startswith("no divisibility witness")
        assert "witness" not in obj
        assert "seed: 5" in capsys.readouterr().out

    def test_opposite_rotations_divisible(self, tmp_path):
        inp = write_tuple(
            tmp_path / "tuple.json",
            [planar_rotation(2, 1, 2, 0.0), planar_rotation(2, 1, 2, math.pi)],
        )
        out = tmp_path / "report.json"
        code = main(["test", "--input", inp, "--n-max", "3", "--seed", "7", "--out", str(out)])
        assert code == 0
        obj = json.loads(out.read_text())
        check_report_schema(obj)
        assert obj["overall"].startswith("fractionally divisible")
        assert obj["witness"]["n"] == 1
        assert obj["residual_max"] <= 1e-8

    def test_reflection_rejected_with_message(self, tmp_path, capsys):
        bad = {"d": 2, "rows": [[1.0, 0.0], [0.0, -1.0]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([bad, bad]))
        code = main(["test", "--input", str(path), "--seed", "1"])
        assert code == 2
        assert "determinant" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert main(["test", "--input", "/nonexistent/tuple.json", "--seed", "1"]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_json_reports_line(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('[{"d": 2, "rows": [[1, 0], [0, 1]]},]')
        assert main(["test", "--input", str(path), "--seed", "1"]) == 2
        assert "line" in capsys.readouterr().err

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "short.json"
        path.write_text(json.dumps([{"d": 3, "rows": [[1, 0, 0]]}]))
        assert main(["test", "--input", str(path), "--seed", "1"]) == 2

    def test_csv_format(self, tmp_path):
        inp = write_tuple(tmp_path / "tuple.json", [identity_rotation(2)] * 2)
        out = tmp_path / "report.csv"
        code = main(
            ["test", "--input", inp, "--n-max", "2", "--seed", "3", "--format", "csv", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "n,N_n,sigma_min_rel,verdict"
        assert len(lines) == 3


class TestCmdConstruct:
    def test_planar(self, tmp_path):
        out = tmp_path / "planar.json"
        code = main(
            ["construct", "planar", "--d", "3", "--r", "3", "--seed", "11",
             "--samples", "20000", "--out", str(out)]
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["verification"]["max_residual"] == 0.0
        assert len(obj["tuple"]) == 3
        assert math.isclose(obj["indicator"]["width"], 2 * math.pi / 3, rel_tol=1e-12)

    def test_odd_d4_random_gamma(self, tmp_path):
        out = tmp_path / "odd.json"
        code = main(
            ["construct", "odd-d4", "--d", "5", "--seed", "13", "--samples", "20000", "--out", str(out)]
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert len(obj["tuple"]) == 4
        assert obj["verification"]["max_residual"] <= 1e-10
        assert obj["witness"]["n"] == 1

    def test_odd_d4_gamma_from_file(self, tmp_path):
        g1 = haar_sample(3, 17)
        gpath = tmp_path / "g1.json"
        gpath.write_text(json.dumps(g1.to_json_obj()))
        out = tmp_path / "odd.json"
        code = main(
            ["construct", "odd-d4", "--d", "3", "--gamma1", str(gpath), "--seed", "19",
             "--samples", "5000", "--out", str(out)]
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert np.allclose(obj["tuple"][0]["rows"], g1.matrix)

    def test_odd_d4_even_dimension_rejected(self, capsys):
        assert main(["construct", "odd-d4", "--d", "4", "--seed", "1"]) == 2
        assert "odd" in capsys.readouterr().err

    def test_d2_analyze(self, tmp_path):
        out = tmp_path / "analysis.json"
        code = main(
            ["construct", "d2-analyze", "--n", "1", "--angles", str(math.pi), "--out", str(out)]
        )
        assert code == 0
        obj = json.loads(out.read_text())
        assert obj["bad_angles"] == [0.0]

    def test_d2_analyze_requires_angles(self):
        assert main(["construct", "d2-analyze", "--n", "1"]) == 2

    def test_planar_requires_dimensions(self):
        assert main(["construct", "planar", "--d", "3"]) == 2

    def test_internal_inconsistency_exit_code(self, monkeypatch, capsys):
        # the theory rules this case out; the exit path still must exist
        from spherediv import cli
        from spherediv.errors import InternalInconsistencyError

        def boom(n, angles):
            raise InternalInconsistencyError("degenerate polynomial")

        monkeypatch.setattr(cli, "analyze_circle", boom)
        code = main(["construct", "d2-analyze", "--n", "1", "--angles", "3.14"])
        assert code == 3
        assert "internal inconsistency" in capsys.readouterr().err


class TestCmdExperiment:
    def test_genericity_outputs(self, tmp_path, capsys):
        config = {
            "kind": "genericity", "d": 3, "r": 3, "ell": 1,
            "trials": 4, "n_max": 2, "seed": 23,
        }
        cpath = tmp_path / "config.json"
        cpath.write_text(json.dumps(config))
        out = tmp_path / "study"
        code = main(["experiment", "--config", str(cpath), "--out", str(out)])
        assert code == 0
        assert "seed: 23" in capsys.readouterr().out
        summary = json.loads((tmp_path / "study.json").read_text())
        assert summary["n_singular"] == 0
        csv_text = (tmp_path / "study.csv").read_text()
        assert csv_text.splitlines()[0] == "trial,n,sigma_min_rel,verdict"
        assert len(csv_text.splitlines()) == 1 + 4 * 2

    def test_genericity_reproducible_csv(self, tmp_path):
        config = {"kind": "genericity", "d": 2, "r": 2, "trials": 3, "n_max": 2, "seed": 29}
        cpath = tmp_path / "config.json"
        cpath.write_text(json.dumps(config))
        main(["experiment", "--config", str(cpath), "--out", str(tmp_path / "a")])
        main(["experiment", "--config", str(cpath), "--out", str(tmp_path / "b")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_search_finds_circle_pair(self, tmp_path):
        base = RotationTuple(
            (planar_rotation(2, 1, 2, 0.2), planar_rotation(2, 1, 2, math.pi - 0.1))
        )
        config = {
            "kind": "search", "d": 2, "r": 2, "n": 1,
            "restarts": 2, "max_iter": 400, "seed": 31,
            "base_tuple": base.to_json_obj(),
        }
        cpath = tmp_path / "config.json"
        cpath.write_text(json.dumps(config))
        out = tmp_path / "search"
        code = main(["experiment", "--config", str(cpath), "--out", str(out)])
        assert code == 0
        summary = json.loads((tmp_path / "search.json").read_text())
        assert summary["certified"] is True
        assert summary["residual_max"] <= 1e-8

    def test_unknown_kind(self, tmp_path):
        cpath = tmp_path / "config.json"
        cpath.write_text(json.dumps({"kind": "nonsense", "seed": 1}))
        assert main(["experiment", "--config", str(cpath)]) == 2

    def test_missing_key(self, tmp_path, capsys):
        cpath = tmp_path / "config.json"
        cpath.write_text(json.dumps({"kind": "genericity", "d": 3, "seed": 1}))
        assert main(["experiment", "--config", str(cpath)]) == 2
        assert "missing config key" in capsys.readouterr().err
