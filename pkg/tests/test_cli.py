import json
import math
import subprocess
import sys

import pytest

from kdvactions.cli import EXIT_OK, EXIT_USAGE, run


def write(tmp_path, doc, name="q.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    comments = [l for l in lines if l.startswith("#")]
    rows = [l.split(",") for l in lines if not l.startswith("#")]
    return comments, rows[0], rows[1:]


def test_spectrum_zero_potential(tmp_path):
    q = write(tmp_path, {})
    out = tmp_path / "s.csv"
    assert run(["spectrum", str(q), "--n-max", "4", "--method", "ode", "-o", str(out)]) == EXIT_OK
    comments, header, rows = read_csv(out)
    assert "sha256=" in comments[0] and "n_max=4" in comments[0]
    assert header == ["n", "lambda_minus", "lambda_plus", "lambda_dot", "gap", "tau", "method"]
    assert len(rows) == 5
    for r in rows[1:]:
        n = int(r[0])
        assert float(r[4]) == 0.0
        assert float(r[1]) == pytest.approx((n * math.pi) ** 2, rel=1e-15)


def test_spectrum_both_methods_agree(tmp_path):
    q = write(tmp_path, {"cosine": {"1": 0.2}})
    out = tmp_path / "s.csv"
    assert run(["spectrum", str(q), "--n-max", "10", "-o", str(out)]) == EXIT_OK
    comments, header, rows = read_csv(out)
    diff = float(comments[1].rsplit("=", 1)[1])
    assert diff < 1e-8
    assert {r[-1] for r in rows} == {"ode", "matrix"}


def test_actions_levels(tmp_path):
    q = write(tmp_path, {"cosine": {"1": 0.2}})
    out = tmp_path / "a.csv"
    assert run(["actions", str(q), "--n-max", "3", "--levels", "0,1,2", "-o", str(out)]) == EXIT_OK
    _, header, rows = read_csv(out)
    assert header == ["n", "I_n", "J_n_0", "J_n_1", "J_n_2", "quad_error", "converged"]
    assert len(rows) == 3 and all(r[-1] == "1" for r in rows)
    assert float(rows[0][1]) == pytest.approx(0.001591539219327886, rel=1e-9)


def test_hamiltonians(tmp_path):
    q = write(tmp_path, {"cosine": {"1": 2.0}})
    out = tmp_path / "h.csv"
    assert run(["hamiltonians", str(q), "--max-level", "2", "-o", str(out)]) == EXIT_OK
    _, header, rows = read_csv(out)
    assert header == ["m", "H_m", "S_2m+3"]
    assert [int(r[0]) for r in rows] == [0, 1, 2]
    assert float(rows[1][1]) == pytest.approx(4 * math.pi ** 2, rel=1e-14)


def test_outputs_are_idempotent_and_input_untouched(tmp_path):
    text = '{"cosine": {"1": 0.5}, "sine": {"2": 0.25}}'
    q = write(tmp_path, text)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run(["actions", str(q), "--n-max", "4", "--levels", "0,1", "-o", str(out)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert q.read_text() == text


def test_verify_single_potential(tmp_path):
    q = write(tmp_path, {"cosine": {"1": 0.2}})
    out = tmp_path / "r.json"
    assert run(["verify", str(q), "--suite", "parseval,trace,localization", "-o", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["config"]["input_sha256"] is not None
    assert all(c["status"] == "pass" for c in doc["checks"])


@pytest.mark.parametrize("doc", ['{"cosine": {"0": 1.0}}', '{"cosine": {"1": NaN}}', "not json"])
def test_bad_input_exits_2(tmp_path, doc, capsys):
    q = write(tmp_path, doc)
    assert run(["spectrum", str(q)]) == EXIT_USAGE
    assert "input error" in capsys.readouterr().err


def test_missing_file_exits_2(tmp_path):
    assert run(["hamiltonians", str(tmp_path / "missing.json")]) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["actions", "q.json", "--tol", "1e-20"],
    ["actions", "q.json", "--levels", "7"],
    ["spectrum", "q.json", "--n-max", "0"],
    ["verify", "--suite", "bogus"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_module_entry_point(tmp_path):
    q = write(tmp_path, {"sine": {"1": 0.3}})
    proc = subprocess.run([sys.executable, "-m", "kdvactions", "hamiltonians", str(q), "--max-level", "1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("# kdvactions")


def test_verify_parseval_on_corpus(tmp_path):
    out = tmp_path / "corpus.json"
    assert run(["verify", "--suite", "parseval", "-o", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["config"]["seed"] == 1729
    assert len(doc["checks"]) == 10
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_actions_even_level_nonnegative(tmp_path):
    q = write(tmp_path, {"cosine": {"1": 0.2}})
    out = tmp_path / "a.csv"
    assert run(["actions", str(q), "--n-max", "5", "--level", "0,1,2", "-o", str(out)]) == EXIT_OK
    _, header, rows = read_csv(out)
    assert [h for h in header if h.startswith("J_n_")] == ["J_n_0", "J_n_1", "J_n_2"]
    assert all(float(r[2]) >= 0 and float(r[4]) >= 0 for r in rows)
