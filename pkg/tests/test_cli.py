import json
import subprocess
import sys
from pathlib import Path

import pytest

from cotlar.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_nested(capsys):
    code, rep, _ = run_json(capsys, "nested", "--config", FIX / "pgl2z.json", "--generator", "s")
    assert code == 0 and rep["result"]["results"][0]["nested"]
    code, rep, _ = run_json(capsys, "nested", "--config", FIX / "a2tilde.json", "--generator", "s")
    assert code == 1
    assert rep["result"]["results"][0]["offenders"] == [["t", 3], ["u", 3]]
    code, _, err = run(capsys, "nested", "--config", FIX / "malformed.json")
    assert code == 2 and "differ" in err


def test_envelope(capsys):
    code, rep, _ = run_json(capsys, "nested", "--config", FIX / "dinf.json")
    assert rep["schema_version"] == 1
    assert rep["command"] == "nested"
    assert rep["exit_code"] == code == 0
    assert "wall_clock_seconds" not in rep
    _, rep, _ = run_json(capsys, "nested", "--config", FIX / "dinf.json", "--timing")
    assert rep["wall_clock_seconds"] >= 0


def test_verify_cotlar(capsys):
    code, rep, _ = run_json(capsys, "verify-cotlar", "--config", FIX / "dinf.json", "--generator", "s", "--radius", 6)
    assert code == 0 and rep["result"]["violation_count"] == 0
    code, rep, _ = run_json(capsys, "verify-cotlar", "--config", FIX / "a2tilde.json", "--generator", "s", "--radius", 4)
    assert code == 1 and rep["result"]["violations"][0] == {"g": ["t"], "h": ["s", "t"], "product": -4}
    code, rep, _ = run_json(capsys, "verify-cotlar", "--config", FIX / "z2_free_z3.json", "--generator", "a", "--radius", 4)
    assert code == 0


def test_verify_cotlar_g0_modes(capsys):
    args = ("verify-cotlar", "--config", FIX / "pgl2z.json", "--generator", "s", "--radius", 3)
    code, rep, _ = run_json(capsys, *args, "--g0", "list:u")
    assert code == 0 and rep["result"]["subgroup"] == "W_{u}"
    code, rep, _ = run_json(capsys, *args, "--g0", "trivial")
    assert code == 1 and rep["result"]["invariance_violation_count"] == 0
    code, _, err = run(capsys, *args, "--g0", "bogus")
    assert code == 2


def test_finer_values(capsys):
    args = ("verify-cotlar", "--config", FIX / "z3_free_z2.json", "--generator", "a", "--radius", 4)
    code, rep, _ = run_json(capsys, *args, "--values", "1,-1,-1")
    assert code == 0 and rep["result"]["finer_model"]["violation_count"] == 0
    code, _, _ = run(capsys, *args, "--values", "1,-1")
    assert code == 2


def test_cap_exit(capsys, monkeypatch):
    code, _, err = run(capsys, "verify-cotlar", "--config", FIX / "dinf.json", "--generator", "s", "--radius", 30)
    assert code == 3 and "max_word_len" in err
    monkeypatch.setenv("COTLAR_MAX_WORD_LEN", "4")
    code, _, _ = run(capsys, "classify", "--config", FIX / "dinf.json", "--generator", "s", "--radius", 5)
    assert code == 3


def test_unknown_generator(capsys):
    code, _, err = run(capsys, "verify-cotlar", "--config", FIX / "dinf.json", "--generator", "x")
    assert code == 2 and "unknown" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "nested", "--config", tmp_path / "nope.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = run(capsys, "nested", "--config", bad)
    assert code == 2


def test_residual(capsys):
    code, rep, _ = run_json(capsys, "residual", "--config", FIX / "dinf.json", "--generator", "s",
                            "--g0", "trivial", "--seed", 1, "--samples", 30)
    assert code == 0
    assert all(r["residual_sup"] == "0 (exact)" for r in rep["result"]["residuals"])


def test_lp_ratio(capsys):
    code, rep, _ = run_json(capsys, "lp-ratio", "--config", FIX / "dinf.json", "--generator", "s",
                            "--samples", 20, "--k", 2)
    assert code == 0 and rep["result"]["p"] == 4 and rep["result"]["max_ratio"] > 0


def test_axioms(capsys):
    code, rep, _ = run_json(capsys, "axioms", "--config", FIX / "path_abc.json", "--radius", 3, "--triple-radius", 2)
    assert code == 0 and rep["result"]["failure_count"] == 0
    code, rep, _ = run_json(capsys, "axioms", "--config", FIX / "corrupted_z2_free_z3.json", "--radius", 3)
    assert code == 1
    assert any(f["axiom"] == "B2" and "E" in f for f in rep["result"]["failures"])


def test_classify(capsys):
    code, rep, _ = run_json(capsys, "classify", "--config", FIX / "dinf.json", "--generator", "s", "--radius", 4)
    assert code == 0
    table = {"".join(r["g"]): r["class"] for r in rep["result"]["table"]}
    assert len(table) == 9
    assert table[""] == "InWT" and table["s"] == "InWTs" and table["t"] == "InNs" and table["ts"] == "NsTimesS"
    code, rep, _ = run_json(capsys, "classify", "--config", FIX / "a2tilde.json", "--generator", "s", "--radius", 1)
    assert code == 1 and rep["result"]["method"] == "scan"


def parse_dot(text):
    nodes = [l for l in text.splitlines() if "[label=" in l and "--" not in l]
    edges = [l for l in text.splitlines() if " -- " in l]
    return nodes, edges


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", "--config", FIX / "dinf.json", "--generator", "s", "--radius", 3)
    nodes, edges = parse_dot(out)
    assert code == 0 and out.startswith("graph chambers {")
    assert len(nodes) == 7 and len(edges) == 6
    assert len({l.split("fillcolor=")[1] for l in nodes}) == 2
    code, out, _ = run(capsys, "export-dot", "--config", FIX / "dinf.json", "--radius", 0, "--color", "none")
    assert len(parse_dot(out)[0]) == 1
    code, out, _ = run(capsys, "export-dot", "--config", FIX / "a2tilde.json", "--generator", "s",
                       "--radius", 2, "--color", "side")
    nodes, edges = parse_dot(out)
    # three neighbours of the identity, each with two further neighbours
    assert len(nodes) == 10
    assert sum(1 for l in edges if l.startswith("  n0 --")) == 3


def test_determinism(capsys):
    args = ("residual", "--config", FIX / "dinf.json", "--generator", "s", "--g0", "trivial",
            "--seed", 5, "--samples", 10, "--numeric", "float")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cotlar", "nested", "--config", str(FIX / "pgl2z.json"), "--generator", "u"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["result"]["results"][0]["offenders"] == [["t", 3]]
