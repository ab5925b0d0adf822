import io as stdio
import json
import subprocess
import sys

import pytest

from privcheck import io
from privcheck.cli import interactive_step_loop, main, read_suite

from .scenarios import DATA, GOLDEN_SUITE

RECORDS = str(DATA / "user89.csv")


def run(*argv):
    out = stdio.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def model(tmp_path):
    path = tmp_path / "u89.model"
    code, text = run("build", "--records", RECORDS, "--user", "89", "--out", str(path))
    assert code == 0
    assert text == f"wrote {path}: 4 processes, user automaton with 7 locations and 9 edges\n"
    return path


def test_build_default_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("PRIVCHECK_OUTPUT_DIR", str(tmp_path))
    code, _ = run("build", "--records", RECORDS, "--user", "89")
    assert code == 0 and (tmp_path / "user_89.model").exists()


def test_check_exit_codes(model):
    code, text = run("check", "--model", str(model), "--query", GOLDEN_SUITE[0][0])
    assert code == 0 and text.splitlines()[1] == "Satisfied"
    code, text = run("check", "--model", str(model), "--query", GOLDEN_SUITE[2][0])
    assert code == 1 and text.splitlines()[1] == "Not Satisfied"


def test_check_prints_counterexample(model, tmp_path):
    out = tmp_path / "cx.json"
    code, text = run("check", "--model", str(model), "--query", GOLDEN_SUITE[2][0], "--trace", "--trace-out", str(out))
    assert code == 1
    assert "counterexample:\ntrace: 3 step(s)\n" in text
    trace = io.read_trace(io.load_model(model), out)
    assert len(trace) == 3


def test_errors_exit_2(model, tmp_path, capsys):
    assert run("check", "--model", str(model), "--query", "E<> user.Nowhere")[0] == 2
    assert "no location 'Nowhere'" in capsys.readouterr().err
    assert run("check", "--model", str(model), "--query", "user.s1 --> user.Share")[0] == 2
    assert run("check", "--model", str(tmp_path / "missing.model"), "--query", "E<> true")[0] == 2
    assert run("build", "--records", RECORDS, "--user", "404", "--out", str(tmp_path / "x"))[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("check", "--model", str(model))[0] == 2


def test_suite(model, tmp_path):
    qfile = tmp_path / "q.txt"
    qfile.write_text("# golden queries\n" + "\n".join(q for q, _ in GOLDEN_SUITE) + "\n\n")
    assert read_suite(qfile) == [q for q, _ in GOLDEN_SUITE]
    code, text = run("suite", "--model", str(model), "--queries", str(qfile))
    lines = text.splitlines()
    assert code == 1
    assert lines[0].split() == ["No", "Verdict", "Query"]
    assert [l.split()[0] for l in lines[1:5]] == ["1", "2", "3", "4"]
    assert "Not Satisfied" in lines[2] and "Not Satisfied" not in lines[1]
    assert lines[-1] == "2/4 satisfied"


def test_suite_all_pass(model, tmp_path):
    qfile = tmp_path / "q.txt"
    qfile.write_text("E<> user.Share\nA[] not deadlock\n")
    assert run("suite", "--model", str(model), "--queries", str(qfile))[0] == 0


def test_oracle():
    code, text = run("oracle", "--records", RECORDS, "--user", "89")
    assert code == 0
    assert text == "48 triples checked, 3 shared, 0 mismatches\n"
    assert run("oracle", "--records", RECORDS, "--user", "7")[0] == 2


def test_simulate_is_seeded(model):
    a = run("simulate", "--model", str(model), "--seed", "5", "--steps", "12")
    b = run("simulate", "--model", str(model), "--seed", "5", "--steps", "12")
    assert a == b and a[0] == 0
    assert a[1].startswith("trace: 12 step(s)\n")
    code, text = run("simulate", "--model", str(model), "--seed", "5", "--steps", "4", "--format", "json")
    assert json.loads(text)["format"] == "privcheck-trace"


def test_export(model, tmp_path):
    code, text = run("export", "--model", str(model), "--dot", str(tmp_path / "dot"))
    assert code == 0 and len(text.splitlines()) == 4
    assert (tmp_path / "dot" / "user.dot").read_text().startswith('digraph "user"')


def test_interactive_loop(net89):
    script = stdio.StringIO("list\ntake 0\n0\n0\nbogus\ntake 9\n0\nreset\nquit\nlist\n")
    out = stdio.StringIO()
    assert interactive_step_loop(net89, script, out) == 0
    text = out.getvalue()
    assert text.startswith("state: (Idle, Information_Type, Trust_Source, Recipient_Role)\n")
    assert "took: health: user Idle -> " in text
    assert "state: (Share, Health, Family, Family)" in text
    assert "commands: list, take <i>, reset, quit" in text
    assert "invalid choice '9'" in text
    assert "took: done (broadcast)" in text
    # the list after quit is never processed
    tail = text.rsplit("state: ", 1)[1].splitlines()
    assert tail[0] == "(Idle, Information_Type, Trust_Source, Recipient_Role)" and len(tail) == 4


def test_output_is_deterministic(model):
    outs = {run("check", "--model", str(model), "--query", GOLDEN_SUITE[2][0], "--trace")[1] for _ in range(3)}
    assert len(outs) == 1


def test_module_entry_point(model):
    proc = subprocess.run(
        [sys.executable, "-m", "privcheck", "check", "--model", str(model), "--query", "E<> user.Share"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "Satisfied" in proc.stdout
