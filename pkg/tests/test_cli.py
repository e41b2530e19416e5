import json

import pytest

from geoxform.cli import main
from geoxform.search import TransformScript
from geoxform.synlang import SKELETON


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_transform_costs(capsys, tmp_path):
    code, out, err = run(capsys, "transform", "--target", "abcd", "ABCD", "--moves", "insdel")
    assert code == 0
    assert json.loads(out) == {"cost": 8, "vertical": 0, "horizontal": 8}
    assert "total cost 8" in err

    script = tmp_path / "s.json"
    code, out, _ = run(capsys, "transform", "--target", "abcd", "ABCD", "--moves", "insdel",
                       "--vertical", "shift31", "-o", str(script))
    assert code == 0
    assert json.loads(out)["cost"] == 5
    assert TransformScript.loads(script.read_text()).end == b"abcd"

    code, out, _ = run(capsys, "transform", "--target", "x", "x")
    assert json.loads(out)["cost"] == 0


def test_transform_reads_files(capsys, tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"ABCD\n")
    code, out, _ = run(capsys, "transform", str(src), "--target", "abcd")
    assert code == 0 and json.loads(out)["cost"] == 8


def test_transform_rot13_goal(capsys):
    code, out, _ = run(capsys, "transform", "gnat", "--goal", "rot13", "--vertical", "rot13")
    assert code == 0 and json.loads(out)["cost"] == 0


def test_transform_budget_exit_code(capsys, tmp_path):
    script = tmp_path / "best.json"
    code, out, err = run(capsys, "transform", "ABCD", "--target", "abcd", "--vertical", "unit",
                         "--budget", "3", "-o", str(script))
    assert code == 2
    assert "budget exhausted" in err
    assert TransformScript.loads(script.read_text()).total_cost == 8


def test_transform_bad_input(capsys):
    code, _, err = run(capsys, "transform", "ABCD", "--target", "café")
    assert code == 4


def test_rewrite_round_trip(capsys, tmp_path):
    src = tmp_path / "a.pdf"
    src.write_bytes(b"1 0 obj\n<< >>\nobjend\n")
    mid = tmp_path / "b.pdf"
    back = tmp_path / "c.pdf"
    code, _, err = run(capsys, "rewrite", str(src), "--rule", "objend-endobj", "-o", str(mid))
    assert code == 0 and "1 sites" in err
    assert b"endobj % objend -> endobj" in mid.read_bytes()
    code, _, _ = run(capsys, "rewrite", str(mid), "--invert", "-o", str(back))
    assert code == 0
    assert back.read_bytes() == src.read_bytes()


def test_rewrite_without_pattern(capsys, tmp_path):
    src = tmp_path / "a.pdf"
    src.write_bytes(b"plain\n")
    out = tmp_path / "b.pdf"
    code, _, err = run(capsys, "rewrite", str(src), "--rule", "objend-endobj", "-o", str(out))
    assert code == 0 and "0 sites" in err
    assert out.read_bytes() == b"plain\n"


def test_rewrite_tampered_exit_code(capsys, tmp_path):
    src = tmp_path / "a.pdf"
    src.write_bytes(b"x objend y\n")
    mid = tmp_path / "b.pdf"
    run(capsys, "rewrite", str(src), "--rule", "objend-endobj", "-o", str(mid))
    mid.write_bytes(mid.read_bytes().replace(b"% objend", b"% objemd"))
    code, _, err = run(capsys, "rewrite", str(mid), "--invert", "-o", str(tmp_path / "c.pdf"))
    assert code == 3
    assert "offset" in err


def test_rewrite_sidecar(capsys, tmp_path):
    src = tmp_path / "a.pdf"
    src.write_bytes(b"objend objend\n")
    mid, side, back = tmp_path / "b.pdf", tmp_path / "b.json", tmp_path / "c.pdf"
    run(capsys, "rewrite", str(src), "--rule", "objend-endobj", "--sidecar", str(side), "-o", str(mid))
    assert mid.read_bytes() == b"endobj endobj\n"
    code, _, _ = run(capsys, "rewrite", str(mid), "--invert", "--sidecar", str(side), "-o", str(back))
    assert code == 0 and back.read_bytes() == b"objend objend\n"


def test_rewrite_refuses_protected_region(capsys, tmp_path):
    src = tmp_path / "a.pdf"
    src.write_bytes(b"(objend)\n")
    code, _, _ = run(capsys, "rewrite", str(src), "--rule", "objend-endobj", "-o", str(tmp_path / "b"))
    assert code == 4


def test_lift_and_unparse(capsys, tmp_path):
    prog = tmp_path / "p.txt"
    prog.write_text("START\nHALT\n")
    code, out, _ = run(capsys, "lift", str(prog), "--to", "ast", "--format", "text")
    assert code == 0 and out.strip() == "Program[Start, Halt]"

    fig = tmp_path / "fig.txt"
    fig.write_text(SKELETON)
    ast_file = tmp_path / "fig.json"
    run(capsys, "lift", str(fig), "--to", "ast", "-o", str(ast_file))
    code, out, _ = run(capsys, "unparse", str(ast_file))
    assert code == 0 and out == SKELETON

    code, out, _ = run(capsys, "lift", str(fig), "--to", "cst")
    assert code == 0 and len(out.splitlines()) == 1


def test_lift_cfg(capsys, tmp_path):
    fig = tmp_path / "fig.txt"
    fig.write_text(SKELETON)
    code, out, err = run(capsys, "lift", str(fig), "--to", "cfg", "--format", "text")
    assert code == 0
    assert out.count("-True->") == 7 and out.count("-False->") == 7
    assert "7 predicate nodes, 4 statement nodes" in err
    code, out, _ = run(capsys, "lift", str(fig), "--to", "cfg", "--format", "dot")
    assert out.startswith("digraph")
    code, out, _ = run(capsys, "lift", str(fig), "--to", "cfg")
    assert json.loads(out)["cfg"]["nodes"][0] == "entry"


def test_lift_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("START\ndo while b\nHALT\n")
    code, _, err = run(capsys, "lift", str(bad), "--to", "ast")
    assert code == 4 and "line 3" in err


def test_distance(capsys, tmp_path):
    assert run(capsys, "distance", "ABCD", "abcd", "--metric", "edit", "--profile", "insdel")[1].strip() == "8"
    assert run(capsys, "distance", "ABCD", "abcd", "--profile", "general")[1].strip() == "4"
    assert run(capsys, "distance", "f", "f", "--metric", "tree")[1].strip() == "0"
    assert run(capsys, "distance", "f(a b)", "f(b)", "--metric", "tree")[1].strip() == "1"
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text(SKELETON)
    b.write_text(SKELETON.replace("  ", "    "))
    assert run(capsys, "distance", str(a), str(b), "--metric", "ast")[1].strip() == "0"
    assert run(capsys, "distance", "f(", "f", "--metric", "tree")[0] == 4


@pytest.mark.parametrize("suite", ["proposition", "rewrite", "synlang"])
def test_verify_suites(capsys, suite):
    code, out, err = run(capsys, "verify", "--suite", suite, "--seed", "7")
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert err.startswith("PASS")


def test_verify_failure_exit_code(capsys, monkeypatch):
    from geoxform import cli, suites

    def broken(seed=0):
        return [suites.PropertyResult("always fails", 1, False, {"x": 1})]

    monkeypatch.setitem(cli.SUITES, "proposition", broken)
    monkeypatch.setattr(cli, "run_suite", lambda name, seed=0: cli.SUITES[name](seed=seed))
    code, out, err = run(capsys, "verify", "--suite", "proposition")
    assert code == 1
    assert json.loads(out)["results"][0]["counterexample"] == {"x": 1}
    assert err.startswith("FAIL")


def test_module_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "geoxform", "distance", "ab", "ba"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "2"
