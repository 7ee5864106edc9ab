import json
import subprocess
import sys

import pytest

from tnnflag.cli import main

MR_ARGS = ["mr", "--type", "A2", "--cell", '{"v":[2],"w":[1,2,1]}', "--params", '["1/2","3"]']


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_mr_then_ca_roundtrip(capsys):
    code, out = run(capsys, *MR_ARGS)
    assert code == 0
    assert out["matrix"] == [["1", "0", "0"], ["1/2", "0", "-1"], ["3", "1", "0"]]
    code, pt = run(capsys, "ca", "--type", "A2", "--matrix", json.dumps(out["matrix"]), "--word", "[1,2,1]")
    assert code == 0
    assert pt == {"v": [2], "w": [1, 2, 1], "word": [1, 2, 1], "params": ["1/2", "3"]}


def test_oracle_only_adds_a_report(capsys):
    _, plain = run(capsys, *MR_ARGS)
    code, checked = run(capsys, *MR_ARGS, "--oracle")
    assert code == 0
    assert checked.pop("oracle") == {"detect_cell": "PASS", "roundtrip": "PASS"}
    assert checked == plain


def test_cells(capsys):
    assert run(capsys, "cells", "--type", "A1")[1] == [
        {"v": [], "w": []}, {"v": [], "w": [1]}, {"v": [1], "w": [1]}]
    code, out = run(capsys, "cells", "--type", "A2")
    assert code == 0 and len(out) == 19
    code, out = run(capsys, "cells", "--type", "A1~", "--max-len", "2")
    assert code == 0 and len(out) == 1 + 2 * 2 + 2 * 4
    assert run(capsys, "cells", "--type", "A1~")[0] == 2


def test_trans_and_act(capsys):
    pt = '{"v":[],"word":[1,2,1],"params":["2","3","5"]}'
    code, out = run(capsys, "trans", "--type", "A2", "--point", pt, "--word", "[2,1,2]", "--oracle")
    assert code == 0 and out["params"] == ["15/7", "7", "6/7"] and out["oracle"]["inverse"] == "PASS"
    code, out = run(capsys, "act", "--type", "A2", "--g", "{}", "--point", pt, "--oracle")
    assert code == 0 and out["params"] == ["2", "3", "5"]
    code, out = run(capsys, "act", "--type", "A1", "--g", '{"y":[1],"c":["4"]}', "--cell", '{"v":[],"w":[]}')
    assert code == 0 and out == {"v": [], "w": [1], "word": [1], "params": ["4"]}


def test_mul_and_fold(capsys):
    code, out = run(capsys, "mul", "--type", "A1", "--g1", '{"y":[1],"c":["1"]}', "--g2", '{"x":[1],"a":["1"]}',
                    "--oracle")
    assert code == 0
    assert out["a"] == ["1/2"] and out["t"] == ["1/2"] and out["c"] == ["1/2"]
    assert set(out["oracle"].values()) == {"PASS"}
    code, out = run(capsys, "mul", "--type", "A3", "--random", "--seed", "3", "--oracle")
    assert code == 0 and set(out["oracle"].values()) == {"PASS"}
    code, info = run(capsys, "fold", "--type", "C2")
    assert code == 0 and info["ambient"] == "A3"
    code, out = run(capsys, "fold", "--type", "C2", "--g", '{"x":[1,2],"a":["2","3"]}', "--oracle")
    assert code == 0 and out["oracle"]["unfold"] == "PASS"
    back = {k: out[k] for k in ("x", "a", "t", "y", "c")}
    code, orig = run(capsys, "fold", "--type", "C2", "--unfold", "--g", json.dumps(back))
    assert code == 0 and orig["x"] == [1, 2] and orig["a"] == ["2", "3"]


def test_trop(capsys):
    pt = '{"v":[],"word":[1,2,1],"params":[3,-1,2]}'
    code, out = run(capsys, "trop", "--type", "A2", "--semifield", "trop", "--point", pt, "--word", "[2,1,2]",
                    "--oracle", "--seed", "5")
    assert code == 0 and out["params"] == [-1, 2, 0] and out["oracle"]["lift_independence"] == "PASS"
    code, out = run(capsys, "trop", "--type", "A2", "--point", pt, "--g", '{"y":[2],"c":[1]}', "--oracle")
    assert code == 0 and out["oracle"]["lift_independence"] == "PASS"


def test_exit_codes(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "mr", "--type", "Q7", "--cell", "{}")[0] == 2
    assert run(capsys, "mr", "--type", "A2", "--cell", "{not json")[0] == 2
    assert run(capsys, "mr", "--type", "A2", "--random")[0] == 2
    code, err = run(capsys, "mr", "--type", "A2", "--cell", '{"v":[1],"w":[2]}')
    assert code == 2 and err["error"] == "OrderViolation"
    code, err = run(capsys, "trans", "--type", "A2", "--cell", '{"v":[],"w":[1,2]}', "--params", '["1","1"]',
                    "--word", "[2,1]")
    assert code == 3 and err["error"] == "MismatchError"
    code, err = run(capsys, "mr", "--type", "D4", "--cell", '{"v":[],"w":[1]}', "--params", '["1"]')
    assert code == 3 and err["error"] == "UnsupportedRealization"
    code, err = run(capsys, "ca", "--type", "A1", "--matrix", '[["1","0"],["-2","1"]]')
    assert code == 4 and err["error"] == "NotNonnegative"


def test_gcm_file(capsys, tmp_path):
    path = tmp_path / "gcm.json"
    path.write_text(json.dumps([[2, -1], [-1, 2]]))
    code, out = run(capsys, "cells", "--gcm-file", str(path))
    assert code == 0 and len(out) == 19
    assert run(capsys, "cells", "--gcm-file", str(tmp_path / "missing.json"))[0] == 2


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--seed", "2")
    assert code == 0 and set(out["results"].values()) == {"PASS"}


@pytest.mark.parametrize("argv", [MR_ARGS, ["mul", "--type", "A2", "--random", "--seed", "9"]])
def test_repeated_runs_are_byte_identical(argv):
    cmd = [sys.executable, "-m", "tnnflag.cli", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n")


def test_stdin_input(monkeypatch, capsys):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO('{"v":[],"w":[1],"params":["3"]}'))
    code, out = run(capsys, "mr", "--type", "A1", "--point", "-")
    assert code == 0 and out["matrix"] == [["1", "0"], ["3", "1"]]
