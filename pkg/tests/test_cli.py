import io
import subprocess
import sys
from pathlib import Path

import pytest

from toricnet import cli
from toricnet import surface as sm


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def tube_file(tmp_path):
    path = tmp_path / "tube.txt"
    path.write_text(sm.format_diagram(sm.tube()))
    return path


def test_lens():
    assert run("lens", "2", "1") == (0, "1\n", "")
    assert run("lens", "1", "0")[1] == "1/2\n"
    code, _, err = run("lens", "4", "2")
    assert code == 2 and "gcd" in err


def test_dim_builtin_and_file(tube_file):
    assert run("dim", "--surface", "1,2", "--labels", "B0,B0")[1] == "8\n"
    assert run("dim", "--diagram", str(tube_file), "--labels", "t=B1,u=B1")[1] == "8\n"
    assert run("dim", "--diagram", str(tube_file), "--labels", "t=B1,u=B0")[1] == "0\n"
    assert run("dim", "--surface", "3,4")[1] == "512\n"


def test_basis_lines(tube_file):
    code, out, _ = run("basis", "--diagram", str(tube_file), "--labels", "B1,B1")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 8 == len(set(lines))
    assert all(line.count("|") == 2 and line.endswith("A") for line in lines)
    assert run("basis", "--diagram", str(tube_file), "--labels", "B1,B1")[1] == out


def test_eval_scalar_and_matrix(tmp_path, tube_file):
    prog = tmp_path / "s3.prog"
    prog.write_text("space empty\nbirth\ndeath\n")
    assert run("eval", str(prog)) == (0, "1/2\n", "")
    prog = tmp_path / "twist.prog"
    prog.write_text(f"space {tube_file.name} B1,B1\ntwist l\n")
    code, out, _ = run("eval", str(prog))
    assert code == 0
    assert out.splitlines()[0] == "dim 8 8"
    assert "." not in out


def test_eval_parse_error_exit_two(tmp_path):
    prog = tmp_path / "bad.prog"
    prog.write_text("space empty\nwiggle\n")
    code, _, err = run("eval", str(prog))
    assert code == 2 and "line 2" in err


def test_bad_diagram_exit_two(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("blob x\n")
    code, _, err = run("dim", "--diagram", str(bad))
    assert code == 2 and "line 1, column 1" in err
    bad.write_text("circle a in 0\npants P belt=a legs=l,r\n")
    code, _, err = run("dim", "--diagram", str(bad))
    assert code == 2 and "invalid diagram" in err


def test_usage_errors():
    assert run("dim")[0] == 2
    assert run("dim", "--surface", "x")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("mcg", "--genus", "3")[0] == 2
    assert run("verify", "--name", "no-such-relation")[0] == 2


def test_verify_single_relation():
    code, out, _ = run("verify", "--name", "pentagon")
    lines = out.splitlines()
    assert code == 0
    assert lines[-1] == "ALL PASS 64/64"
    assert "SUMMARY pentagon 64/64" in lines
    assert all(line.startswith(("PASS", "SUMMARY", "ALL")) for line in lines)


def test_mcg_word_and_order(tmp_path):
    code, out, _ = run("mcg", "--genus", "1", "--word", "t0", "--order")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "dim 4 4" and lines[-1] == "order 6"
    assert len(lines) == 1 + 4 + 1
    table = tmp_path / "curves.txt"
    table.write_text("curve c 110000\n")
    code, out, _ = run("mcg", "--genus", "3", "--curves", str(table), "--word", "c c")
    assert code == 0 and out.splitlines()[0] == "dim 64 64"
    assert run("mcg", "--genus", "1", "--word", "zz")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toricnet.cli", "lens", "0", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"


SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.mark.parametrize("argv,first", [
    (["dim", "--diagram", "tube.txt"], "8"),
    (["eval", "s3.prog"], "1/2"),
    (["eval", "twist.prog"], "dim 8 8"),
    (["eval", "handle.prog"], "dim 2 2"),
    (["mcg", "--genus", "3", "--curves", "curves3.txt", "--word", "a c", "--order"], "dim 64 64"),
])
def test_samples(argv, first):
    argv = [str(SAMPLES / a) if (SAMPLES / a).is_file() else a for a in argv]
    code, out, _ = run(*argv)
    assert code == 0 and out.splitlines()[0] == first
