import io
import json

import pytest

from g2q.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_dim_sqv():
    assert call("dim", "sqv", "--n", "3") == (0, "77\n")


def test_dim_component():
    assert call("dim", "component", "--d", "1,1") == (0, "1\n")


def test_eval_loop_is_quantum_dimension():
    code, text = call("eval", "--diagram", "cup ; cap")
    assert code == 0
    assert "q^10" in text.replace("**", "^") or "q^10" in text


def test_eval_map():
    code, text = call("eval", "--diagram", "id")
    assert code == 0
    assert text.startswith("map V^1 -> V^1")
    assert len(text.splitlines()) == 8


@pytest.mark.parametrize("argv", [
    ("eval", "--diagram", "cup ; id"),
    ("eval", "--diagram", "frobnicate"),
    ("dim", "sqv"),
    ("dim", "component", "--d", "1,1", "--m", "3"),
    ("invariant", "phi", "--indices", "1,2,3"),
    ("verify", "nonsense"),
    ("verify", "rep", "--jobs", "0"),
    (),
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


def test_invariant_phi():
    code, text = call("invariant", "phi", "--indices", "1,2", "--print")
    assert code == 0
    assert text.startswith("Phi(1,2) in A_2(V): 7 terms")


def test_verify_rep_writes_report(tmp_path):
    path = tmp_path / "r.json"
    code, text = call("verify", "rep", "--report", str(path))
    assert code == 0
    assert text.splitlines()[-1].endswith("0 failed, 0 skipped") or " 0 failed" in text.splitlines()[-1]
    data = json.loads(path.read_text())
    assert data["suite"] == "verify-rep"
    assert all(c["status"] == "pass" for c in data["checks"])


def test_verify_failing_suite_exits_1():
    code, text = call("verify", "pre-am")
    assert code == 1
    assert "FAIL" in text


def test_verify_commute_single_suite():
    assert call("verify", "commute", "--suite", "ijij")[0] == 0


def test_jobs_give_same_summary():
    a = call("verify", "commute", "--suite", "ppp", "--suite", "ijij")
    b = call("verify", "commute", "--suite", "ppp", "--suite", "ijij", "--jobs", "2")
    assert a == b


def test_cache_build_and_clear(tmp_path):
    code, text = call("cache", "build", "--max-degree", "2", "--cache-dir", str(tmp_path))
    assert code == 0
    assert "degree 2: dim 28" in text
    assert list(tmp_path.glob("kernel-n*.txt"))
    code, text = call("cache", "clear", "--cache-dir", str(tmp_path))
    assert code == 0
    assert not list(tmp_path.glob("kernel-n*.txt"))
