import json
import re

import pytest

from privcheck import io
from privcheck.checker import check
from privcheck.errors import ModelFileError, RecordError, TraceError
from privcheck.model import InformationType, RecipientRole, TrustSource
from privcheck.semantics import Trace, simulate
from privcheck.synthesis import build_observer, synthesize_behavior

from .scenarios import DATA, GOLDEN_SUITE

HEADER = ",".join(io.RECORD_COLUMNS) + "\n"


def test_record_rows():
    recs = io.load_records(DATA / "user89.csv")
    assert len(recs) == 8
    r2, r3 = recs[1], recs[2]
    assert r2.triple == (InformationType.HEALTH, TrustSource.FAMILY, RecipientRole.FAMILY) and r2.shared
    assert r3.recipient_role is RecipientRole.ONLINE_SERVICE and not r3.shared
    assert [r.scenario_id for r in recs] == list(range(1, 9))


@pytest.mark.parametrize(
    "row,fragment",
    [
        ("89,1,wealth,family,family,1", "unknown information_type 'wealth'"),
        ("89,1,health,cousin,family,1", "unknown trust_source"),
        ("89,1,health,family,family,yes", "decision must be 1 or 0"),
        ("89,x,health,family,family,1", "not an integer"),
        ("89,1,health,family,1", "expected 6 columns"),
        (",1,health,family,family,1", "empty user_id"),
    ],
)
def test_bad_rows_name_the_row(row, fragment):
    with pytest.raises(RecordError, match=fragment) as info:
        io.parse_records(HEADER + "89,9,finance,friend,friend,0\n" + row + "\n")
    assert info.value.row == 3


def test_bad_header_and_empty_file():
    with pytest.raises(RecordError):
        io.parse_records("user,scenario\n")
    with pytest.raises(RecordError):
        io.parse_records("")


def test_conflicting_duplicate():
    text = HEADER + "1,1,health,family,family,1\n1,2,health,family,family,0\n"
    with pytest.raises(RecordError, match="both ways") as info:
        io.parse_records(text)
    assert info.value.row == 3


def test_records_roundtrip(tmp_path):
    recs = io.load_records(DATA / "user89.csv")
    io.save_records(recs, tmp_path / "r.csv")
    assert io.load_records(tmp_path / "r.csv") == recs
    assert io.records_for_user(recs, 89) == recs
    assert io.records_for_user(recs, "90") == []


# ---------------------------------------------------------------------------
# model files


def test_model_roundtrip_is_byte_stable(net89, tmp_path):
    path = tmp_path / "m.model"
    io.save_model(net89, path)
    loaded = io.load_model(path)
    assert loaded == net89
    assert io.dump_model(loaded) == path.read_text(encoding="utf-8")


def test_guarded_model_preserves_expressions(net242_fixed):
    text = io.dump_model(net242_fixed)
    loaded = io.parse_model(text)
    assert loaded == net242_fixed
    assert io.dump_model(loaded) == text
    doc = json.loads(text)
    user = doc["processes"][0]
    assert {"select": "day : [1, 7]"}.items() <= next(e for e in user["edges"] if "select" in e).items()
    guards = {e.get("guard") for e in user["edges"]}
    assert {"day >= 1 and day <= 5", "counter < 2", "counter >= 2"} <= guards
    assert any(e.get("update") == "counter := counter + 1" for e in user["edges"])


def test_dangling_edge_is_rejected(net89):
    doc = io.network_to_dict(net89)
    doc["processes"][0]["edges"][0]["target"] = "Nowhere"
    with pytest.raises(ModelFileError, match="Nowhere"):
        io.network_from_dict(doc)


def test_version_and_format_checks(net89):
    doc = io.network_to_dict(net89)
    doc["version"] = 2
    with pytest.raises(ModelFileError, match="version"):
        io.network_from_dict(doc)
    with pytest.raises(ModelFileError):
        io.parse_model("{not json")
    with pytest.raises(ModelFileError):
        io.parse_model('{"format": "other"}')


def test_bad_guard_text_is_a_model_file_error(net89):
    doc = io.network_to_dict(net89)
    doc["processes"][0]["edges"][0]["guard"] = "x <"
    with pytest.raises(ModelFileError):
        io.network_from_dict(doc)


# ---------------------------------------------------------------------------
# DOT

NODE = re.compile(r'^\s*"[^"]+" \[')
EDGE = re.compile(r'^\s*"[^"]+" -> "[^"]+"')


def _counts(text):
    lines = text.splitlines()
    return sum(bool(NODE.match(l)) for l in lines), [l for l in lines if EDGE.match(l)]


def test_behavioral_dot(net89):
    text = io.to_dot(net89.processes[0])
    nodes, edges = _counts(text)
    assert nodes == 7
    done = [e for e in edges if "done!" in e]
    assert done == ['  "Share" -> "Idle" [label="done!"];']
    assert text.count("doublecircle") == 2
    assert '"Idle" [shape=doublecircle, xlabel="C", style=bold]' in text


def test_observer_dot():
    nodes, edges = _counts(io.to_dot(build_observer("info_type")))
    assert nodes == 4 and len(edges) == 6


def test_empty_language_dot():
    nodes, edges = _counts(io.to_dot(synthesize_behavior([])))
    assert nodes == 1 and edges == []


def test_dot_labels_show_guard_sync_update(net242):
    text = io.to_dot(net242.processes[0])
    assert "counter < 2\\nr_online!\\ncounter := counter + 1" in text
    assert "day : [1, 7]\\nrelationship!" in text


def test_export_network_writes_one_file_per_process(net89, tmp_path):
    paths = io.export_dot(net89, tmp_path / "dot")
    assert [p.name for p in paths] == [
        "user.dot",
        "information_type.dot",
        "trust_source.dot",
        "recipient_role.dot",
    ]
    single = io.export_dot(net89.processes[1], tmp_path / "one.dot")
    assert single[0].read_text() == io.to_dot(net89.processes[1])


# ---------------------------------------------------------------------------
# traces


def test_counterexample_text(net89):
    trace = check(net89, GOLDEN_SUITE[2][0]).trace
    text = io.format_trace(net89, trace)
    lines = text.splitlines()
    assert lines[0] == "trace: 3 step(s)"
    assert lines[1].startswith("initial: (Idle,")
    assert [l.split()[0] for l in lines[2::2]] == ["1:", "2:", "3:"]
    users = [l.split("(")[1].split(",")[0] for l in lines[3::2]]
    assert users == ["s2", "s5", "Share"]
    assert "finance: user Idle -> s2 | information_type Information_Type -> Finance" in text


def test_empty_trace_is_header_only(net89):
    text = io.format_trace(net89, Trace(check(net89, "E<> user.Idle").trace.initial))
    assert text.splitlines()[0] == "trace: 0 step(s)" and len(text.splitlines()) == 2


def test_structured_roundtrip_replays(net242_fixed, tmp_path):
    trace = simulate(net242_fixed, seed=3, max_steps=25)
    path = tmp_path / "t.json"
    io.write_trace(net242_fixed, trace, path, "json")
    assert io.read_trace(net242_fixed, path) == trace


def test_lasso_and_deadlock_roundtrip(net89, net242):
    lasso = check(net89, "E[] true").trace
    assert io.trace_from_dict(net89, io.trace_to_dict(net89, lasso)) == lasso
    dead = check(net242, "A[] not deadlock").trace
    assert dead.deadlocked
    assert io.trace_from_dict(net242, io.trace_to_dict(net242, dead)) == dead
    assert io.format_trace(net242, dead).endswith("deadlock: no enabled transitions\n")


def test_tampered_trace_is_rejected(net89):
    doc = io.trace_to_dict(net89, check(net89, GOLDEN_SUITE[2][0]).trace)
    doc["steps"][1]["config"]["locations"][0] = "Share"
    with pytest.raises(TraceError):
        io.trace_from_dict(net89, doc)
    doc = io.trace_to_dict(net89, check(net89, GOLDEN_SUITE[2][0]).trace)
    doc["processes"] = ["user"]
    with pytest.raises(TraceError, match="different network"):
        io.trace_from_dict(net89, doc)


def test_output_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("PRIVCHECK_OUTPUT_DIR", str(tmp_path))
    assert io.default_output_dir() == tmp_path
