import json
import subprocess
import sys

import pytest

from kitecalc.cli import main
from kitecalc.literals import parse_element, parse_shape

K21 = "kite{I=2,J=1,lam=[0],rho=[1]}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "--shape", K21, "--term", "x*y", "--bind", "x=U[-2,-3]", "--bind", "y=L[5]")
    assert code == 0 and out.strip() == "L[3]"
    assert run(capsys, "eval", "--shape", K21, "--term", "1")[1].strip() == "U[0,0]"
    assert run(capsys, "eval", "--shape", K21, "--term", "~x", "--bind", "x=U[-1,0]")[1].strip() == "L[1]"
    code, out, _ = run(capsys, "eval", "--shape", K21, "--term", "~x", "--bind", "x=U[-1,0]", "--format", "json")
    assert json.loads(out) == {"value": "L[1]"}


@pytest.mark.parametrize("argv,code", [
    (["eval", "--shape", K21, "--term", "x*", "--bind", "x=U[0,0]"], 2),
    (["eval", "--shape", K21, "--term", "x", "--bind", "x=U[1,0]"], 2),
    (["eval", "--shape", "kite{I=2}", "--term", "1"], 2),
    (["eval", "--shape", K21, "--term", "x*y", "--bind", "x=U[0,0]"], 2),
    (["eval", "--shape", K21, "--term", "x", "--bind", "x=U[0,0,0]"], 3),
    (["eval", "--shape", K21, "--term", "x", "--bind", "x=U[(0,0),(0,0)]"], 3),
    (["check", "--shape", K21, "--identity", "nosuchlaw"], 2),
    (["check", "--shape", K21, "--identity", "comm", "--bound", "3", "--max-evals", "10"], 4),
    (["check", "--shape", "kite{ZZ01}", "--identity", "comm"], 3),
    (["approx", "--op", "mul", "--bind", "u=U{0:-1}"], 2),
    (["approx", "--op", "pow", "--bind", "u=U{0:-1}", "--bind", "w=U{}"], 2),
])
def test_error_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argument_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "--shape", K21, "--identity", "good", "--bound", "-1"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["approx", "--op", "mul", "--levels", "0", "--bind", "u=U{}"])


def test_check_examples(capsys):
    code, out, _ = run(capsys, "check", "--shape", K21, "--identity", "prelin", "--bound", "2")
    assert code == 0 and "holds" in out
    code, out, _ = run(capsys, "check", "--shape", K21, "--identity", "good", "--bound", "1", "--format", "json")
    assert code == 1
    assert json.loads(out) == {"identity": "good", "holds": False, "counterexample": {"x": "U[0,-1]"},
                               "evaluations": 4}
    code, _, _ = run(capsys, "check", "--shape", "kite{I=1,J=1,lam=[0],rho=[0]}", "--identity", "mvint",
                     "--bound", "2")
    assert code == 0


def test_check_inline_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "--shape", K21, "--identity", "x*y = y*x", "--format", "json")
    assert code == 1 and json.loads(out)["counterexample"] == {"x": "L[1]", "y": "U[0,-1]"}
    f = tmp_path / "laws.txt"
    f.write_text("# two laws\nassoc : (x*y)*z = x*(y*z)\ncomm : x*y = y*x\n")
    code, out, _ = run(capsys, "check", "--shape", K21, "--identity", str(f), "--bound", "1", "--format", "json")
    data = json.loads(out)
    assert code == 1 and [d["identity"] for d in data] == ["assoc", "comm"]
    assert data[0]["holds"] and not data[1]["holds"]


def test_check_env_cap(capsys, monkeypatch):
    monkeypatch.setenv("KITECALC_MAX_EVALS", "5")
    assert run(capsys, "check", "--shape", K21, "--identity", "comm")[0] == 4
    assert run(capsys, "check", "--shape", K21, "--identity", "comm", "--max-evals", "1000")[0] == 1


def test_json_identical_across_worker_counts(capsys, monkeypatch):
    from kitecalc import checker
    monkeypatch.setattr(checker, "CHUNK", 8)
    outs = []
    for w in ("1", "2", "3"):
        outs.append(run(capsys, "check", "--shape", K21, "--identity", "comm", "--bound", "2",
                        "--workers", w, "--format", "json")[1])
    assert outs[0] == outs[1] == outs[2]


def test_json_round_trips_through_parsers(capsys):
    _, out, _ = run(capsys, "check", "--shape", K21, "--identity", "mvint", "--format", "json")
    for lit in json.loads(out)["counterexample"].values():
        parse_element(lit)
    _, out, _ = run(capsys, "decompose", "--shape", "kite{I=3,J=2,lam=[0,1],rho=[1,0]}", "--format", "json")
    for f in json.loads(out)["factors"]:
        parse_shape(f["shape"])


def test_classify_and_decompose(capsys):
    code, out, _ = run(capsys, "classify", "--shape", K21)
    assert code == 0 and out.splitlines()[0] == "Type5(1)"
    code, out, _ = run(capsys, "classify", "--shape", "kite{I=2,J=2,lam=[0,1],rho=[0,1]}", "--format", "json")
    assert json.loads(out) == {"shape": "kite{I=2,J=2,lam=[0,1],rho=[0,1]}", "si": False, "type": "NotSI",
                               "witness": None}
    code, out, _ = run(capsys, "decompose", "--shape", "kite{I=2,J=2,lam=[0,1],rho=[0,1]}", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [f["type"] for f in data["factors"]] == ["Type1(1)", "Type1(1)"]
    assert data["injective"] and data["preserving"]


def test_approx(capsys):
    code, out, _ = run(capsys, "approx", "--op", "mul", "--bind", "u=L{0:5}", "--bind", "w=U{1:-3}",
                       "--levels", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["k"] <= 1 and data["verified"] and data["N"] == 4
    code, out, _ = run(capsys, "approx", "--kind", "nu", "--op", "rneg", "--bind", "u=L{0:1}", "--format", "json")
    data = json.loads(out)
    assert code == 1 and not data["verified"] and data["diff_sets"][0] == [0]
    code, _, _ = run(capsys, "approx", "--kind", "nu", "--op", "meet", "--bind", "u=L{0:1}", "--bind", "w=U{2:-1}")
    assert code == 0


def test_covers(capsys):
    code, out, _ = run(capsys, "covers", "--n-max", "3", "--bound", "2", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert [(r["n"], r["exponent"], r["holds"], r["sharp"]) for r in rows] == [(1, 3, True, True), (2, 5, True, True),
                                                                              (3, 7, True, True)]
    assert rows[0]["separations"] == {"2": True, "3": True} and rows[1]["separations"] == {"3": True}


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kitecalc.cli", "classify", "--shape", K21],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("Type5(1)")
