import json
import os

import numpy as np
import pytest

from sjdomains import report


def test_encode_value():
    assert report.encode_value(1 + 2j) == [1.0, 2.0]
    assert report.encode_value(np.float64(0.5)) == 0.5
    assert report.encode_value(np.int32(3)) == 3
    assert report.encode_value(np.array([1j, 2.0])) == [[0.0, 1.0], [2.0, 0.0]]
    assert report.encode_value({"a": (1j,)}) == {"a": [[0.0, 1.0]]}


def test_residual_check_boundary():
    assert report.residual_check("x", 1e-9, 1e-9).passed
    assert not report.residual_check("x", 1.0000001e-9, 1e-9).passed


def test_mc_check_floor():
    good = report.mc_check("x", 1.0 + 0j, sigma=0.01, target=1.02)
    assert good.passed  # 2 sigma away
    bad = report.mc_check("x", 1.0 + 0j, sigma=0.001, target=1.02)
    assert not bad.passed
    rescued = report.mc_check("x", 1.0 + 0j, sigma=0.001, target=1.02, floor=0.05)
    assert rescued.passed
    assert good.detail["target"] == [1.02, 0.0]


def test_check_dict_schema():
    c = report.residual_check("roundtrip", 1e-13, 1e-10)
    d = c.to_dict()
    assert d == {"name": "roundtrip", "pass": True, "residual": 1e-13, "tol": 1e-10}
    c = report.mc_check("norm", 1.001, 0.002, 1.0)
    d = c.to_dict()
    assert set(d) == {"name", "pass", "estimate", "sigma", "tol", "detail"}


def test_report_schema_and_json_stability():
    checks = [report.residual_check("a", 0.0, 1.0)]
    rep = report.VerifyReport("demo", {"n": 1}, 7, checks)
    data = json.loads(rep.to_json())
    assert set(data) == {"suite", "params", "seed", "checks", "pass"}
    assert data["pass"] is True
    assert rep.to_json() == report.VerifyReport("demo", {"n": 1}, 7, checks).to_json()
    stamped = report.VerifyReport("demo", {"n": 1}, 7, checks).stamp()
    assert "timestamp" in json.loads(stamped.to_json())


def test_report_fails_when_any_check_fails():
    checks = [report.residual_check("a", 0.0, 1.0),
              report.residual_check("b", 2.0, 1.0)]
    assert not report.VerifyReport("demo", {}, 0, checks).passed


def test_atomic_write(tmp_path):
    path = tmp_path / "out.json"
    report.atomic_write_text(str(path), "hello\n")
    assert path.read_text() == "hello\n"
    report.atomic_write_text(str(path), "replaced\n")
    assert path.read_text() == "replaced\n"
    assert [p for p in os.listdir(tmp_path) if p.endswith(".tmp")] == []


def test_matrix_csv_text():
    mat = np.array([[1.0, 1j], [0.0, 2.0]])
    sig = np.full((2, 2), 0.5)
    text = report.matrix_csv_text(mat, ["r0", "r1"], ["c0", "c1"], sigma=sig)
    lines = text.strip().splitlines()
    assert lines[0] == "i,j,row,col,re,im,sigma"
    assert len(lines) == 5
    assert lines[2].split(",")[:4] == ["0", "1", "r0", "c1"]
    assert "0.5" in lines[1]


def test_write_csv_rows(tmp_path):
    path = tmp_path / "rows.csv"
    report.write_csv_rows(str(path), ["a", "b"], [[1, 2.5], [3, 1j]])
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "a,b"
    assert len(lines) == 3
