import json

import numpy as np
import pytest

from sjdomains import cli


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- eval: frozen examples ---

def test_eval_p_s_frozen(capsys):
    code, out, _ = run(["eval", "P_s", '{"s": [2], "Z": 1, "W": 0.5}'], capsys)
    assert code == 0
    assert json.loads(out) == [1.5, 0.0]


def test_eval_a_form_frozen(capsys):
    code, out, _ = run(["eval", "A", '{"W": 0.5, "z": 1}'], capsys)
    assert code == 0
    val = json.loads(out)
    assert val[0] == pytest.approx(2.0, abs=1e-12)
    assert val[1] == pytest.approx(0.0, abs=1e-12)


def test_eval_cayley_base_point(capsys):
    code, out, _ = run(["eval", "cayley", '{"W": 0, "z": 0}'], capsys)
    assert code == 0
    val = json.loads(out)
    assert val["Omega"] == [[[0.0, 1.0]]]
    assert val["zeta"] == [[0.0, 0.0]]


def test_eval_cayley_inverse_of_base(capsys):
    code, out, _ = run(
        ["eval", "cayley",
         '{"direction": "inverse", "Omega": [[[0, 1]]], "zeta": [[0, 0]]}'],
        capsys)
    assert code == 0
    val = json.loads(out)
    assert np.allclose(val["W"], [[[0.0, 0.0]]])


def test_eval_without_point_returns_coefficients(capsys):
    code, out, _ = run(["eval", "P_s", '{"s": [2]}'], capsys)
    assert code == 0
    terms = json.loads(out)
    # P_2 = Z^2 + W: two monomials with unit coefficients
    assert sorted((t["s"], t["c"]) for t in terms) == [
        ([0], [1.0, 0.0]), ([2], [1.0, 0.0])]


def test_eval_q_a_scalar(capsys):
    # n=1, a=1: Q_1(w) = w / sqrt(pi * B(2, k - 3/2))
    code, out, _ = run(["eval", "Q_a", '{"a": 1, "n": 1, "W": 0.5, "z": 0}'],
                       capsys)
    assert code == 0


def test_eval_theta_identity_roundtrip(capsys):
    g = {"a": [[[1, 0]]], "b": [[[0, 0]]], "c": [[[0, 0]]], "d": [[[1, 0]]],
         "lam": [[0, 0]], "mu": [[0, 0]], "kappa": 0}
    code, out, _ = run(["eval", "theta", json.dumps({"g": g})], capsys)
    assert code == 0
    star = json.loads(out)
    assert set(star) == {"p", "q", "alpha", "varkappa"}
    code, out, _ = run(
        ["eval", "theta", json.dumps({"g": star, "inverse": True})], capsys)
    assert code == 0
    back = json.loads(out)
    assert np.allclose(back["a"], g["a"]) and np.allclose(back["d"], g["d"])


# --- exit code contract ---

def test_verify_pass_exit_zero(capsys):
    code, out, _ = run(
        ["verify", "--suite", "cayley", "--n", "2", "--seed", "7",
         "--no-timestamp"], capsys)
    assert code == 0
    assert "[PASS]" in out


def test_verify_fail_exit_one(capsys):
    code, out, _ = run(
        ["verify", "--suite", "group-axioms", "--tol", "1e-30",
         "--no-timestamp"], capsys)
    assert code == 1
    assert "[FAIL]" in out


def test_gram_suite_bad_k_exit_two(capsys):
    code, _, err = run(["verify", "--suite", "series-gram", "--k", "1"], capsys)
    assert code == 2
    assert "k > n + 1/2" in err


def test_eval_bad_json_exit_two(capsys):
    code, _, err = run(["eval", "P_s", "{not json"], capsys)
    assert code == 2
    assert "error:" in err


def test_eval_missing_key_exit_two(capsys):
    code, _, err = run(["eval", "P_s", "{}"], capsys)
    assert code == 2
    assert "error:" in err


def test_unknown_suite_usage_exit_two(capsys):
    code, _, _ = run(["verify", "--suite", "nope"], capsys)
    assert code == 2


def test_bad_config_exit_two(capsys):
    code, _, err = run(["verify", "--suite", "cayley", "--m", "-1"], capsys)
    assert code == 2
    assert "m must be positive" in err


# --- reports ---

def test_report_json_schema_and_determinism(tmp_path, capsys):
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    args = ["verify", "--suite", "cocycle", "--seed", "5", "--no-timestamp"]
    assert cli.main(args + ["--out", str(p1)]) == 0
    assert cli.main(args + ["--out", str(p2)]) == 0
    capsys.readouterr()
    assert p1.read_bytes() == p2.read_bytes()
    doc = json.loads(p1.read_text())
    assert set(doc) == {"suite", "params", "seed", "checks", "pass"}
    assert doc["pass"] is True
    for chk in doc["checks"]:
        assert "name" in chk and "pass" in chk


def test_report_timestamp_present_by_default(tmp_path, capsys):
    p = tmp_path / "r.json"
    assert cli.main(["verify", "--suite", "cayley", "--out", str(p)]) == 0
    capsys.readouterr()
    assert "timestamp" in json.loads(p.read_text())


def test_verify_csv_format(tmp_path, capsys):
    p = tmp_path / "r.csv"
    code = cli.main(["verify", "--suite", "cayley", "--format", "csv",
                     "--no-timestamp", "--out", str(p)])
    capsys.readouterr()
    assert code == 0
    lines = p.read_text().strip().splitlines()
    assert lines[0] == "name,pass,residual,estimate,sigma,tol"
    assert len(lines) >= 2


# --- tables ---

def test_table_gram_phi_csv(tmp_path, capsys):
    p = tmp_path / "g.csv"
    code = cli.main(["table", "--kind", "gram-phi", "--trunc", "4",
                     "--format", "csv", "--out", str(p)])
    capsys.readouterr()
    assert code == 0
    import csv
    rows = list(csv.reader(p.read_text().splitlines()))
    assert len(rows) == 26  # header + 5x5 entries
    assert rows[0][:2] == ["i", "j"]
    re_col = rows[0].index("re")
    # diagonal entries approximately 1, off-diagonal approximately 0
    for parts in rows[1:]:
        i, j, re = int(parts[0]), int(parts[1]), float(parts[re_col])
        assert abs(re - (1.0 if i == j else 0.0)) < 1e-8


def test_table_calibration(capsys):
    code, out, _ = run(["table", "--kind", "calibration"], capsys)
    assert code == 0
    doc = json.loads(out)
    ratios = {row["n"]: row["ratio"] for row in doc["rows"]}
    assert ratios[1] == pytest.approx(4.0, abs=1e-9)
    assert ratios[2] == pytest.approx(16.0, abs=1e-9)


def test_table_expansion_convergence_monotone_tail(capsys):
    code, out, _ = run(["table", "--kind", "expansion-convergence",
                        "--trunc", "12"], capsys)
    assert code == 0
    doc = json.loads(out)
    resid = [r for _, r in doc["rows"]]
    assert resid[-1] < resid[0]
    assert resid[-1] < 1e-6


def test_table_gram_big_f_json(capsys):
    code, out, _ = run(["table", "--kind", "gram-F", "--samples", "20000"],
                       capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "gram-F"
    mat = np.asarray([[complex(re, im) for re, im in row]
                      for row in doc["matrix"]])
    assert mat.shape == (len(doc["labels"]),) * 2
    assert np.max(np.abs(mat - np.eye(mat.shape[0]))) < 0.1
