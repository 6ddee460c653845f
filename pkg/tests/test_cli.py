from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from maxdet.cli import corpus_check, corpus_dir, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_feasible_plane_order_six(capsys):
    code, out, _ = run(capsys, "feasible", "brc", "43", "7", "1")
    assert code == 1 and "SYMBOL" in out and "prime=3" in out
    code, _, _ = run(capsys, "feasible", "brc", "43", "7", "1", "--lenient")
    assert code == 0
    code, out, _ = run(capsys, "feasible", "brc", "7", "3", "1")
    assert code == 0 and "FEASIBLE_UNKNOWN" in out


def test_verify_corpus_barba(capsys):
    code, out, _ = run(capsys, "verify", "corpus/B_7.rum", "--claim", "barba")
    assert code == 0 and out.startswith("OK")


def test_verify_wrong_claim(capsys):
    code, out, _ = run(capsys, "verify", "corpus/B_7.rum", "--claim", "hadamard")
    assert code == 1 and "Gram mismatch" in out


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "5", "3", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["outputs"]["barba_sq"] == 2304 and rep["command"] == "bounds"


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "feasible", "brc", "43")[0] == 2
    assert run(capsys, "bounds", "x", "3")[0] == 2
    assert run(capsys, "construct", "nope", "3")[0] == 2
    assert run(capsys, "verify", "no/such/file.rum")[0] == 2
    assert run(capsys, "search")[0] == 2


def test_construct_roundtrip(tmp_path, capsys):
    out = tmp_path / "f.rum"
    code, _, _ = run(capsys, "construct", "gw-paley", "7", "3", "-o", str(out))
    assert code == 0
    code, text, _ = run(capsys, "verify", str(out), "--claim", "GW(7)")
    assert code == 0


def test_json_is_deterministic(capsys):
    a = run(capsys, "search", "paley-sub", "11", "--h", "4", "--rows", "11", "--seed", "3", "--json")[1]
    b = run(capsys, "search", "paley-sub", "11", "--h", "4", "--rows", "11", "--seed", "3", "--json")[1]
    assert a == b and json.loads(a)["seed"] == 3
    c = run(capsys, "corpus", "--json")[1]
    d = run(capsys, "corpus", "--json")[1]
    assert c == d


def test_tables_and_search(capsys):
    code, out, _ = run(capsys, "tables", "planes")
    assert out.split()[:3] == ["6", "14", "21"]
    code, out, _ = run(capsys, "search", "exhaustive", "4", "3")
    assert code == 0 and "189" in out
    code, out, _ = run(capsys, "search", "residue", "70", "--json")
    assert json.loads(out)["outputs"]["primes"] == [7, 29, 31, 41, 47, 59, 61]


def test_corpus_all_pass():
    rep = corpus_check()
    assert rep.ok and rep.outputs["total"] >= 15 and rep.outputs["passed"] == rep.outputs["total"]
    assert len(rep.corpus_checksums) == rep.outputs["total"]


@pytest.fixture
def corpus_copy(tmp_path):
    d = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), d)
    return d


def test_corpus_truncated_file(corpus_copy):
    f = corpus_copy / "B_7.rum"
    f.write_text("\n".join(f.read_text().splitlines()[:-2]) + "\n")
    rep = corpus_check(corpus_copy)
    bad = [r for r in rep.outputs["results"] if not r["ok"]]
    assert not rep.ok and len(bad) == 1
    assert bad[0]["file"] == "B_7.rum" and "parse error" in bad[0]["error"]


def test_corpus_altered_entry(corpus_copy):
    f = corpus_copy / "B_10.rum"
    lines = f.read_text().splitlines()
    # flip the last exponent of the last row
    toks = lines[-1].split()
    toks[-1] = str((int(toks[-1]) + 1) % 3)
    lines[-1] = " ".join(toks)
    f.write_text("\n".join(lines) + "\n")
    rep = corpus_check(corpus_copy)
    bad = [r for r in rep.outputs["results"] if not r["ok"]]
    assert [b["file"] for b in bad] == ["B_10.rum"] and "Gram mismatch" in bad[0]["error"]


def test_threads_env_gives_same_report(monkeypatch):
    a = corpus_check().to_json()
    monkeypatch.setenv("MAXDET_THREADS", "2")
    assert corpus_check().to_json() == a


def test_console_script():
    exe = shutil.which("maxdet")
    cmd = [exe] if exe else [sys.executable, "-m", "maxdet.cli"]
    p = subprocess.run(cmd + ["bounds", "5", "3"], capture_output=True, text=True)
    assert p.returncode == 0 and "2304" in p.stdout
