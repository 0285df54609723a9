import io
import json

import pytest

from graphs import DISK, SPHERE
from shadowreduce.cli import run


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text.replace(" / ", "\n") + "\n")
        return p

    return write


def test_homology_json(files):
    code, out, _ = cli("homology", files("disk.graph", DISK))
    assert code == 0
    assert json.loads(out) == {"betti": [1, 0, 0], "torsion1": [], "euler": 1, "acyclic": True}


def test_reduce_with_trace(example8_path, tmp_path):
    trace = tmp_path / "t.json"
    code, out, _ = cli("reduce", example8_path, "--trace", trace, "--check-invariants")
    assert code == 0
    data = json.loads(trace.read_text())
    assert [s["spec"] for s in data["steps"]] == ["YV p=3 d=5", "A b=4 v=2", "YV p=6 d=8"]
    assert all("ledger" in s for s in data["steps"])
    assert out.splitlines()[0].split() == ["1", "YV", "p=3", "d=5"]


def test_reduce_not_acyclic(files):
    code, _, err = cli("reduce", files("sphere.graph", SPHERE))
    assert code == 2 and "NotAcyclic" in err


def test_reduce_malformed(files):
    code, _, _ = cli("reduce", files("bad.graph", "vertex 1 B / vertex 2 P / edge 1 1.1 2.1"))
    assert code == 3


def test_syntax_error_is_validation_failure(files):
    code, _, err = cli("validate", files("bad.graph", "vertex one B"))
    assert code == 3 and "SyntaxError" in err


def test_validate(files):
    assert cli("validate", files("d.graph", DISK))[:2] == (0, "well-formed\n")
    code, out, _ = cli("validate", "--json", files("b.graph", "vertex 1 Y12 / vertex 2 B / edge 1 1.2 2.1"))
    assert code == 3
    assert json.loads(out)["violations"][0]["code"] == "UnsaturatedSlot"


def test_usage_errors(files):
    assert cli("reduce", files("d.graph", DISK), "--bogus")[0] == 64
    assert cli()[0] == 64
    assert cli("frobnicate")[0] == 64
    assert cli("homology", "/nonexistent/file.graph")[0] == 64
    assert cli("apply", files("d.graph", DISK), "Q x=1")[0] == 64


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("SHADOW_REDUCE_SEED", "11")
    a = cli("gen", "--n", 9, "--acyclic")[1]
    b = cli("gen", "--n", 9, "--acyclic", "--seed", 11)[1]
    c = cli("gen", "--n", 9, "--acyclic", "--seed", 12)[1]
    assert a == b != c
    monkeypatch.setenv("SHADOW_REDUCE_SEED", "x")
    assert cli("gen", "--n", 9)[0] == 64


def test_regions_text(example8_path):
    code, out, _ = cli("regions", example8_path)
    lines = out.splitlines()
    assert lines[0].split() == ["id", "kind", "sheets"]
    assert lines[1].split() == ["1.1", "internal", "1.1", "2.1"]


def test_cut_and_euler(example8_path):
    code, out, _ = cli("cut", "--json", example8_path, 2)
    assert code == 0 and json.loads(out)["separating"] is True
    assert cli("euler", example8_path)[1] == "1\n"


def test_apply(example8_path):
    code, out, _ = cli("apply", "--json", example8_path, "YV p=3 d=5")
    data = json.loads(out)
    assert code == 0
    assert data["record"]["vertex_delta"] == -2
    assert "vertex 3" not in data["graph"]


def test_apply_pattern_mismatch(example8_path):
    code, _, err = cli("apply", example8_path, "A b=4 v=3")
    assert code == 1 and "PatternMismatch" in err


def test_enumerate_counts():
    code, out, _ = cli("enumerate", 2, "--count", "--json")
    assert json.loads(out) == {"1": 1, "2": 26}
    code, out, _ = cli("enumerate", 3, "--acyclic-only", "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 2 and all(r["acyclic"] for r in rows)
    assert cli("enumerate", 0, "--count")[0] == 0
    assert cli("enumerate", 9)[0] == 1


def test_oracle_selftest_command():
    code, out, _ = cli("oracle-selftest", "--count", 10, "--json")
    assert code == 0 and json.loads(out)["failures"] == []
    code, _, _ = cli("oracle-selftest", "--count", 10, "--inject-fault")
    assert code == 1


def test_export_dot(files):
    code, out, _ = cli("export-dot", files("d.graph", DISK))
    assert out.startswith("graph martelli {") and out.count(" -- ") == 1


def test_seed_gleams_are_deterministic(example8_path, tmp_path):
    t1, t2 = tmp_path / "a.json", tmp_path / "b.json"
    cli("reduce", example8_path, "--seed-gleams", "--seed", 3, "--trace", t1)
    cli("reduce", example8_path, "--seed-gleams", "--seed", 3, "--trace", t2)
    assert json.loads(t1.read_text()) == json.loads(t2.read_text())
