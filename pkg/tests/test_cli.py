import io
import subprocess
import sys

import pytest

from weakspe.cli import main

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_fixpoint_trace_golden():
    code, out = run("fixpoint", "g4.game", "--trace")
    assert code == 0 and out == (GOLDEN / "g4_trace.tsv").read_text()


def test_fixpoint_final_labels_and_invariants():
    code, out = run("fixpoint", "g4.game", "--check-invariants")
    assert code == 0
    assert "v1\t{o1,o2,o3}\n" in out and "# invariants hold; 8 steps" in out


def test_verify_exit_codes(tmp_path):
    assert run("verify", "fig1.game", "--profile", "fig1_thick.profile")[0] == 0
    assert run("verify", "g4.game", "--profile", "g4_ring.profile")[0] == 0
    bad = tmp_path / "bad.profile"
    bad.write_text("player p1 states 1 initial 0\n0 v0 -> 0 v2\n0 v2 -> 0 v2\n0 v3 -> 0 v3\n"
                   "player p2 states 1 initial 0\n0 v1 -> 0 v0\n")
    code, out = run("verify", "fig1.game", "--profile", str(bad))
    assert code == 1 and out.startswith("counterexample")


def test_solve_then_verify(tmp_path):
    for game, start in (("fig1.game", "v0"), ("g4.game", "v1"), ("g4.game", "v3")):
        code, out = run("solve", game, "--from", start)
        assert code == 0
        path = tmp_path / "p.profile"
        path.write_text(out)
        assert run("verify", game, "--profile", str(path), "--from", start)[0] == 0


def test_solve_dot():
    code, out = run("solve", "fig1.game", "--emit", "dot")
    assert code == 0 and out.startswith("digraph")
    assert '"v0" -> "v1" [style=bold' in out


def test_layers():
    code, out = run("layers", "g4.game")
    assert code == 1 and out.startswith("not layered:")
    code, out = run("layers", "fig1.game")
    assert code == 0 and out == "layer 0: o2 < o3 [p1 p2]\n"


def test_oracles(tmp_path):
    code, out = run("oracle", "g4.game", "--mode", "positional-exhaustion")
    assert code == 1 and out == "0 of 16 positional profiles are weak SPEs from v1\n"
    code, out = run("oracle", "fig1.game", "--mode", "positional-exhaustion")
    assert code == 0
    tree = tmp_path / "t.game"
    tree.write_text("players: a b\n[outcomes]\nx y\norder a: x < y\norder b: y < x\n"
                    "[vertices]\nr a\ns b\nl1 a leaf=x\nl2 a leaf=y\nl3 a leaf=x\n"
                    "[edges]\nr s\nr l1\ns l2\ns l3\nl1 l1\nl2 l2\nl3 l3\n")
    code, out = run("oracle", str(tree), "--mode", "tree-backward-induction")
    assert code == 0 and "0 r -> 0 s" in out and "0 s -> 0 l3" in out
    code, _ = run("oracle", "g4.game", "--mode", "tree-backward-induction")
    assert code == 2


def test_input_errors(tmp_path, capsys):
    assert run("fixpoint", str(tmp_path / "missing.game"))[0] == 2
    broken = tmp_path / "b.game"
    broken.write_text("players: p\n[vertices]\nx q\n[edges]\nx x\n")
    assert run("solve", str(broken))[0] == 2
    assert "line 3" in capsys.readouterr().err
    assert run("solve", "fig1.game", "--from", "nowhere")[0] == 2
    assert run("bogus")[0] == 2


@pytest.mark.parametrize("argv", [
    ["solve", "g4.game"], ["solve", "fig1.game", "--emit", "dot"],
    ["fixpoint", "g4.game", "--trace"], ["layers", "g4.game"],
    ["verify", "g4.game", "--profile", "g4_ring.profile"],
    ["oracle", "g4.game", "--mode", "positional-exhaustion"],
])
def test_byte_determinism_across_processes(argv):
    cmd = [sys.executable, "-m", "weakspe.cli", *argv]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True, env={"PYTHONHASHSEED": "123", "PATH": ""})
    assert a.stdout == b.stdout and a.returncode == b.returncode
