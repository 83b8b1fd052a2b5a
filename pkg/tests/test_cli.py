import json
import subprocess
import sys

import pytest

from qellr import verify
from qellr.cli import main
from qellr.cochains import cochain_to_json, random_cocycle
from qellr.groups import dihedral


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


def test_point_of_dihedral_group(capsys):
    doc = run_json(capsys, "point", "--group", "dihedral:4")
    res = doc["result"]
    assert res["rank"] == 16 and len(res["components"]) == 4
    for c in res["components"]:
        assert c["relations"]["relations"] == [f"x_{c['class']}^4 - q^{c['class']}"]
        assert c["relations"]["verified"]
    man = doc["manifest"]
    assert man["command"] == "qellr point" and man["omega"] == 4 and man["version"]


def test_alias_matches_subcommand(capsys):
    a = run_json(capsys, "point", "--group", "dihedral:3")
    b = run_json(capsys, "qellr", "point", "--group", "dihedral:3")
    assert a["result"] == b["result"]


def test_group_specs(capsys):
    assert run_json(capsys, "group", "--group", "split(symmetric:3)")["result"]["order"] == 12
    assert run_json(capsys, "group", "--group", "product(dihedral:2,graded_cyclic:4)")["result"]["order"] == 16
    classes = run_json(capsys, "classes", "--group", "dihedral:5")["result"]["classes"]
    assert len(classes) == 5


def test_group_from_json_file_is_hashed(capsys, tmp_path):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({"generators": ["(1 2 3)", "(1 2)"], "pi_of_generators": [1, -1]}))
    doc = run_json(capsys, "classes", "--group", str(path))
    assert len(doc["manifest"]["inputs"][str(path)]) == 64
    assert len(doc["result"]["classes"]) == 3


def test_transgress_with_cocycle_file(capsys, tmp_path):
    path = tmp_path / "alpha.json"
    path.write_text(json.dumps(cochain_to_json(random_cocycle(dihedral(3), 3, 6, seed=0))))
    doc = run_json(capsys, "transgress", "--group", "dihedral:3", "--cocycle", str(path))
    assert doc["result"]


@pytest.mark.parametrize("argv", [
    ["tate", "check", "--N", "3"],
    ["tate", "table", "--N", "2"],
    ["chartab", "--group", "dihedral:4"],
    ["mackey"],
    ["power", "--N", "2", "--group", "dihedral:2"],
    ["power", "--N", "2", "--group", "dihedral:2", "--string", "--precision", "3"],
])
def test_commands_succeed(capsys, argv):
    doc = run_json(capsys, *argv)
    assert "result" in doc and "manifest" in doc


def test_tate_multiply(capsys):
    p = {"xi": {"sign": 1, "zeta": 0, "q_num": 2, "q_den": 3}, "i": 2}
    doc = run_json(capsys, "tate", "mul", "--N", "3", "--a", json.dumps(p), "--b", json.dumps(p))
    assert doc["result"]["product"] == {"i": 1, "xi": {"q_den": 3, "q_num": 1, "sign": 1, "zeta": 0}}


@pytest.mark.parametrize("argv", [
    ["point", "--group", "nonsense:3"],
    ["point", "--group", "dihedral:x"],
    ["tate", "check", "--N", "0"],
    ["tate", "mul", "--N", "3", "--a", "{bad json", "--b", "{}"],
])
def test_bad_input_exits_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_group_file_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(capsys, "group", "--group", str(path))[0] == 2
    path.write_text(json.dumps({"generators": ["(1 2 3)"], "pi_of_generators": [-1]}))
    assert run(capsys, "classes", "--group", str(path))[0] == 2


def test_order_bound_exits_3(capsys, monkeypatch):
    monkeypatch.setenv("QELLR_ORDER_BOUND", "20")
    assert run(capsys, "group", "--group", "symmetric:5")[0] == 3


def test_failing_verification_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(verify, "CRITERIA", [(1, "always fails", lambda quick: {"pass": False})])
    code, out = run(capsys, "verify", "--quick")
    assert code == 1 and json.loads(out)["result"]["pass"] is False


def test_output_file_and_determinism(capsys, tmp_path):
    out = tmp_path / "o.json"
    first = run(capsys, "point", "--group", "split(symmetric:3)", "--out", str(out))[1]
    second = run(capsys, "point", "--group", "split(symmetric:3)")[1]
    assert first == second
    assert out.read_text().strip() == first.strip()


def test_pretty_output(capsys):
    code, out = run(capsys, "point", "--group", "dihedral:3", "--pretty")
    assert code == 0 and "x_1^3 - q^1" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qellr", "tate", "check", "--N", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["pass"]
