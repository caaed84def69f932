import json
import subprocess
import sys
from pathlib import Path

import pytest

from slwords.cli import BENCH_COLUMNS, main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decompose_writes_verified_word(tmp_path, capsys):
    out = tmp_path / "w.json"
    led = tmp_path / "l.json"
    code, _, _ = run(["decompose", "--gens", str(SAMPLES / "sl33_gens.json"), "--target", str(SAMPLES / "target_perm.json"),
                      "--out", str(out), "--ledger", str(led)], capsys)
    assert code == 0
    word = json.loads(out.read_text())
    assert word["length"] > 0 and word["nodes"]
    ledger = json.loads(led.read_text())
    assert ledger["verified"] is True
    assert [s["name"] for s in ledger["stages"]][-1] == "SL"


def test_decompose_identity_is_empty(capsys):
    code, out, _ = run(["decompose", "--gens", str(SAMPLES / "sl33_gens.json"), "--target", str(SAMPLES / "target_identity.json")], capsys)
    assert code == 0 and json.loads(out)["length"] == 0


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["decompose", "--gens", str(bad), "--target", str(SAMPLES / "target_perm.json")], capsys)
    assert code == 2 and "malformed" in err
    assert run(["decompose", "--gens", str(SAMPLES / "sl33_gens.json")], capsys)[0] == 2
    assert run(["nosuch"], capsys)[0] == 2
    code, _, err = run(["gentest", "--set", str(SAMPLES / "three_cycle.json"), "--field", "prime:7"], capsys)
    assert code == 2 and "disagrees" in err


def test_decompose_not_generating(tmp_path, capsys):
    gens = tmp_path / "g.json"
    gens.write_text(json.dumps({"field": {"kind": "prime", "p": 3}, "n": 3,
                                "generators": [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]]}))
    code, out, _ = run(["decompose", "--gens", str(gens), "--target", str(SAMPLES / "target_perm.json")], capsys)
    assert code == 1
    assert json.loads(out)["error"]["kind"] == "not_generating"


@pytest.mark.parametrize("name,code,verdict", [("three_cycle.json", 0, "SL"), ("sp43.json", 1, "Sp"), ("plane.json", 1, "not_irreducible")])
def test_gentest(name, code, verdict, capsys):
    c, out, _ = run(["gentest", "--set", str(SAMPLES / name)], capsys)
    assert c == code and json.loads(out)["verdict"] == verdict


def test_graph_dot(capsys):
    code, out, _ = run(["graph", "--set", str(SAMPLES / "three_cycle.json")], capsys)
    assert code == 0 and out.count("->") == 3


def test_diameter(capsys):
    code, out, _ = run(["diameter", "--gens", str(SAMPLES / "sl33_gens.json")], capsys)
    assert code == 0 and json.loads(out)["diameter"] > 0
    code, out, _ = run(["diameter", "--gens", str(SAMPLES / "sl33_gens.json"), "--cap", "100"], capsys)
    assert code == 3 and json.loads(out)["error"] == "overflow"
    assert run(["diameter"], capsys)[0] == 2


def test_bench_columns_and_determinism(capsys):
    argv = ["bench", "--n", "3", "--p", "3", "--trials", "2", "--seed", "4"]
    c1, o1, _ = run(argv, capsys)
    c2, o2, _ = run(argv, capsys)
    assert c1 == c2 == 0 and o1 == o2
    lines = o1.strip().splitlines()
    assert lines[0].split(",") == BENCH_COLUMNS and len(lines) == 3
    assert all(line.split(",")[-1] == "1" for line in lines[1:])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "slwords", "gentest", "--set", str(SAMPLES / "three_cycle.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["verdict"] == "SL"
