import json
import math

import numpy as np
import pytest

from etlab.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTable:
    def test_stdout_and_determinism(self, capsys):
        code, out1, _ = invoke(capsys, "table1")
        assert code == 0
        code, out2, _ = invoke(capsys, "table1")
        assert out1 == out2
        lines = out1.strip().split("\n")
        assert lines[0] == "k,R,H,D,ratio"
        assert len(lines) == 21
        row0 = lines[1].split(",")
        assert float(row0[1]) == pytest.approx(1.1, abs=1e-9)
        assert float(row0[2]) == pytest.approx(0.0986, abs=2e-3)
        assert float(row0[3]) == pytest.approx(0.3188, abs=2e-3)
        assert float(row0[4]) == pytest.approx(0.5765, abs=1e-3)

    def test_file_output(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = invoke(capsys, "table1", "--out", str(target))
        assert code == 0
        assert target.read_text().startswith("k,R,H,D,ratio")


class TestPhi:
    def test_near_zero_at_critical(self, capsys):
        code, out, _ = invoke(capsys, "phi", "--L", "0", "--R", "1.8102")
        assert code == 0
        assert abs(float(out.strip())) < 1e-4

    def test_bad_domain_exit_2(self, capsys):
        code, _, err = invoke(capsys, "phi", "--L", "2", "--R", "1.5")
        assert code == 2 and "error:" in err


class TestCheckPoly:
    def test_all_roots_at_one(self, capsys, tmp_path):
        doc = {"roots": [[1.0, 0.0]] * 8}
        path = tmp_path / "p.json"
        path.write_text(json.dumps(doc))
        code, out, _ = invoke(capsys, "check-poly", str(path))
        assert code == 0
        payload = json.loads(out.strip().split("\n")[-1])
        assert payload["D"] == pytest.approx(1.0)
        assert payload["H"] == pytest.approx(0.6931, abs=1e-4)
        assert payload["bound"] == pytest.approx(1.1774, abs=1e-4)
        assert payload["holds"] is True

    def test_coefficient_form(self, capsys, tmp_path):
        doc = {"coeffs": [[-1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}
        path = tmp_path / "z4.json"
        path.write_text(json.dumps(doc))
        code, out, _ = invoke(capsys, "check-poly", str(path))
        assert code == 0
        payload = json.loads(out.strip().split("\n")[-1])
        assert payload["D"] == pytest.approx(0.25, abs=1e-9)

    def test_missing_file_exit_2(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "check-poly", str(tmp_path / "nope.json"))
        assert code == 2


class TestExtremalCmd:
    def test_kind2_report(self, capsys):
        code, out, _ = invoke(capsys, "extremal", "--kind", "2", "--R", "2.0")
        assert code == 0
        payload = json.loads(out.strip())
        assert payload["h_tilde"] == pytest.approx(math.pi**2, abs=1e-4)
        assert payload["d_tilde"] == pytest.approx(math.pi * math.sqrt(3.0) - 2.0,
                                                   abs=1e-4)

    def test_kind_mismatch_is_input_error(self, capsys):
        code, _, err = invoke(capsys, "extremal", "--kind", "3", "--R", "2.5")
        assert code == 2

    def test_density_csv_roundtrip(self, capsys, tmp_path):
        target = tmp_path / "density.csv"
        code, _, _ = invoke(capsys, "extremal", "--kind", "2", "--R", "2.0",
                            "--emit-density", str(target))
        assert code == 0
        lines = target.read_text().strip().split("\n")
        assert lines[0] == "x,density"
        xs, vals = zip(*((float(a), float(b)) for a, b in
                         (ln.split(",") for ln in lines[1:])))
        from etlab.measures import AdmissibleDistR, admissible_density_line
        mu = AdmissibleDistR("II", 1.0, 2.0)
        recomputed = admissible_density_line(mu, np.array(xs))
        assert np.allclose(recomputed, np.array(vals), atol=1e-5)


class TestSharpnessCmd:
    def test_small_chain(self, capsys):
        code, out, _ = invoke(capsys, "sharpness", "--m", "0.2", "--n", "128",
                              "--q", "256")
        assert code == 0
        payload = json.loads(out.strip())
        assert payload["rational"]["G"] > 0.5


class TestSimulate:
    def test_scenario_roundtrip(self, capsys, tmp_path):
        scenario = {"M": 0.0, "m": 0.2, "mass": 0.6, "n_cells": 256,
                    "iters": 20000, "tol": 1e-3}
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(scenario))
        trace = tmp_path / "trace.csv"
        out_csv = tmp_path / "final.csv"
        code, out, _ = invoke(capsys, "simulate", str(path),
                              "--trace-out", str(trace), "--out", str(out_csv))
        assert code == 0
        payload = json.loads(out.strip())
        assert payload["residual"] <= 1e-3
        header, *rows = out_csv.read_text().strip().split("\n")
        assert header == "center,value" and len(rows) == 256
        t_header, *t_rows = trace.read_text().strip().split("\n")
        assert t_header == "iteration,energy,residual" and len(t_rows) >= 1


class TestGaneliusCmd:
    def test_density_document(self, capsys, tmp_path):
        doc = {"diracs": [], "even": True,
               "family": {"tag": "UniformPlus",
                          "params": {"cos": [0.5], "sin": [0.0]}}}
        path = tmp_path / "density.json"
        path.write_text(json.dumps(doc))
        code, out, _ = invoke(capsys, "ganelius", str(path))
        assert code == 0
        payload = json.loads(out.strip().split("\n")[-1])
        assert payload["holds"] is True
        assert payload["ratio"] == pytest.approx(1.0 / math.pi, abs=1e-4)

    def test_atomic_document_rejected(self, capsys, tmp_path):
        doc = {"atoms": [[0.0, 1.0]]}
        path = tmp_path / "atoms.json"
        path.write_text(json.dumps(doc))
        code, _, err = invoke(capsys, "ganelius", str(path))
        assert code == 2


class TestPeriodizeCmd:
    def test_height_identity_report(self, capsys):
        code, out, _ = invoke(capsys, "periodize", "--R", "2.0", "--lambda", "0.1")
        assert code == 0
        payload = json.loads(out.strip())
        assert payload["difference"] <= 1e-3
        assert payload["r_ring"] is not None and payload["r_ring"] > 0.2


class TestUsage:
    def test_unknown_command_exit_2(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_missing_required_exit_2(self, capsys):
        assert run(["phi", "--L", "0"]) == 2
