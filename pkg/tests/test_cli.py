import json

from waringmat.cli import main


def run(capsys, argv, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        import io
        import sys

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_decompose_text(capsys, monkeypatch):
    code, out = run(capsys, ["decompose", "--field", "2^1", "--k", "3"], "0 1\n1 1\n", monkeypatch)
    assert code == 0
    assert "strategy: thm3" in out
    assert "1 0\n1 0" in out and "1 1\n0 1" in out


def test_decompose_not_decomposable(capsys, monkeypatch):
    code, out = run(
        capsys,
        ["decompose", "--field", "3^1", "--k", "6", "--out", "json"],
        "0 1\n0 0\n",
        monkeypatch,
    )
    assert code == 2
    obj = json.loads(out)
    assert obj["citation"] == "Lemma 23class1"


def test_decompose_k1_json(capsys, monkeypatch):
    code, out = run(
        capsys,
        ["decompose", "--field", "5^1", "--k", "1", "--out", "json"],
        "1 2\n3 4\n",
        monkeypatch,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["strategy"] == "k1"
    assert obj["B"]["rows"] == [[1, 2], [3, 4]]
    assert set(obj) == {"B", "C", "k", "strategy", "certificate"}


def test_decompose_json_matrix_input(capsys, monkeypatch):
    payload = json.dumps({"field": "2^2", "n": 2, "rows": [["g", "0"], ["1", "1+g"]]})
    code, out = run(
        capsys,
        ["decompose", "--field", "2^2", "--k", "3", "--out", "json"],
        payload,
        monkeypatch,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["k"] == 3


def test_decompose_parse_error(capsys, monkeypatch):
    code, _ = run(capsys, ["decompose", "--field", "3^1", "--k", "2"], "0 1\n", monkeypatch)
    assert code == 1


def test_verify_theorem(capsys):
    code, out = run(capsys, ["verify-theorem", "--id", "M22", "--k", "6", "--jobs", "1"])
    assert code == 0 and "PASS" in out
    code, out = run(capsys, ["verify-theorem", "--id", "M32", "--k", "42", "--jobs", "1", "--out", "json"])
    assert code == 2  # the registered table has a genuine defect at 42 mod 84
    assert json.loads(out)["status"] == "FAIL"
    code, _ = run(capsys, ["verify-theorem", "--id", "bogus"])
    assert code == 1


def test_scalar_waring(capsys):
    code, out = run(capsys, ["scalar-waring", "--field", "7^1", "--k", "3", "--out", "json"])
    assert code == 0
    obj = json.loads(out)
    assert obj["d"] == 3 and obj["gamma"] == 3 and sorted(obj["residues"]) == ["0", "1", "6"]


def test_count_classes(capsys):
    code, out = run(capsys, ["count", "--field", "3^1", "--n", "2", "--what", "classes", "--out", "json"])
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 12
    code, out = run(capsys, ["count", "--field", "2^1", "--n", "2", "--what", "cyclic", "--out", "json"])
    assert json.loads(out)["count"] == 5
    code, out = run(capsys, ["count", "--field", "2^1", "--n", "2", "--what", "idempotent", "--out", "json"])
    assert json.loads(out)["count"] == 8


def test_tables(capsys):
    code, out = run(capsys, ["tables", "--case", "2,2", "--kmax", "12", "--jobs", "1", "--out", "json"])
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 12 and all(r["match"] for r in rows)


def test_seed_determinism(capsys, monkeypatch):
    argv = ["decompose", "--field", "3^1", "--k", "1", "--seed", "17", "--out", "json"]
    code1, out1 = run(capsys, argv, "1 1\n0 1\n", monkeypatch)
    code2, out2 = run(capsys, argv, "1 1\n0 1\n", monkeypatch)
    assert (code1, out1) == (code2, out2)
