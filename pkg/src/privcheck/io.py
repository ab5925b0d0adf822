"""Reading and writing records, models, DOT diagrams and traces.

All writers are byte-deterministic for a fixed input.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
from pathlib import Path

from . import expr as ex
from .errors import ModelError, ModelFileError, QuerySyntaxError, RecordError, TraceError
from .model import (
    Automaton,
    Channel,
    ChannelKind,
    DisclosureRecord,
    Edge,
    InformationType,
    Location,
    Network,
    RecipientRole,
    TrustSource,
    VariableDecl,
    parse_sync,
)
from .semantics import Configuration, Move, Step, StepKind, Trace, describe_step, format_config, replay

RECORD_COLUMNS = ("user_id", "scenario_id", "information_type", "trust_source", "recipient_role", "decision")
MODEL_FORMAT = "privcheck-model"
MODEL_VERSION = 1
TRACE_FORMAT = "privcheck-trace"
TRACE_VERSION = 1


# ---------------------------------------------------------------------------
# disclosure records


def _factor(enum_cls, token, column, row):
    try:
        return enum_cls(token.strip().lower())
    except ValueError:
        allowed = "|".join(v.value for v in enum_cls)
        raise RecordError(f"unknown {column} {token!r} (expected {allowed})", row) from None


def parse_records(lines) -> list:
    """Parse CSV text (a string or an iterable of lines) into records.

    Row numbers in errors count the header as row 1.
    """
    if isinstance(lines, str):
        lines = _io.StringIO(lines)
    reader = csv.reader(lines)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise RecordError("empty record file") from None
    if tuple(header) != RECORD_COLUMNS:
        raise RecordError(f"header must be {','.join(RECORD_COLUMNS)}", 1)
    records = []
    seen = {}
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(RECORD_COLUMNS):
            raise RecordError(f"expected {len(RECORD_COLUMNS)} columns, got {len(row)}", row_no)
        user, scenario, it, ts, rr, decision = (c.strip() for c in row)
        if not user:
            raise RecordError("empty user_id", row_no)
        try:
            scenario_id = int(scenario)
        except ValueError:
            raise RecordError(f"scenario_id {scenario!r} is not an integer", row_no) from None
        if decision not in ("0", "1"):
            raise RecordError(f"decision must be 1 or 0, got {decision!r}", row_no)
        rec = DisclosureRecord(
            user,
            scenario_id,
            _factor(InformationType, it, "information_type", row_no),
            _factor(TrustSource, ts, "trust_source", row_no),
            _factor(RecipientRole, rr, "recipient_role", row_no),
            decision == "1",
        )
        key = (rec.user_id, rec.triple)
        if key in seen and seen[key][0] != rec.shared:
            raise RecordError(
                f"user {user!r} answered ({it}, {ts}, {rr}) both ways (first at row {seen[key][1]})", row_no
            )
        seen.setdefault(key, (rec.shared, row_no))
        records.append(rec)
    return records


def load_records(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_records(fh)


def format_records(records) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for r in records:
        writer.writerow(
            [r.user_id, r.scenario_id, r.info_type.value, r.trust_source.value, r.recipient_role.value, int(r.shared)]
        )
    return buf.getvalue()


def save_records(records, path) -> None:
    Path(path).write_text(format_records(records), encoding="utf-8")


def records_for_user(records, user_id) -> list:
    return [r for r in records if str(r.user_id) == str(user_id)]


# ---------------------------------------------------------------------------
# model files


def network_to_dict(network: Network) -> dict:
    processes = []
    for p in network.processes:
        locations = []
        for loc in p.locations:
            entry = {"name": loc.name}
            if loc.initial:
                entry["initial"] = True
            if loc.committed:
                entry["committed"] = True
            if loc.urgent:
                entry["urgent"] = True
            locations.append(entry)
        edges = []
        for e in p.edges:
            entry = {"source": e.source, "target": e.target}
            if e.select is not None:
                entry["select"] = ex.format_select(e.select)
            if not ex.is_true(e.guard):
                entry["guard"] = ex.format_formula(e.guard)
            if e.sync is not None:
                entry["sync"] = str(e.sync)
            if e.update:
                entry["update"] = ex.format_update(e.update)
            edges.append(entry)
        processes.append({"name": p.name, "locations": locations, "edges": edges})
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "channels": [{"name": c.name, "kind": c.kind.value} for c in network.channels],
        "variables": [{"name": v.name, "min": v.min, "max": v.max, "init": v.init} for v in network.variables],
        "aliases": [{"alias": a, "target": b} for a, b in network.aliases],
        "processes": processes,
    }


def dump_model(network: Network) -> str:
    return json.dumps(network_to_dict(network), indent=2, ensure_ascii=False) + "\n"


def _req(obj, key, where):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise ModelFileError(f"{where}: missing field {key!r}") from None


def network_from_dict(doc: dict) -> Network:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFileError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFileError(f"unsupported model version {doc.get('version')!r} (expected {MODEL_VERSION})")
    try:
        channels = tuple(
            Channel(_req(c, "name", "channel"), ChannelKind(c.get("kind", "binary"))) for c in doc.get("channels", [])
        )
        variables = tuple(
            VariableDecl(_req(v, "name", "variable"), int(_req(v, "min", "variable")), int(_req(v, "max", "variable")),
                         int(v.get("init", v["min"])))
            for v in doc.get("variables", [])
        )
        aliases = tuple((_req(a, "alias", "alias"), _req(a, "target", "alias")) for a in doc.get("aliases", []))
        processes = []
        for p in _req(doc, "processes", "model"):
            name = _req(p, "name", "process")
            locations = tuple(
                Location(
                    _req(loc, "name", f"process {name!r} location"),
                    bool(loc.get("initial", False)),
                    bool(loc.get("committed", False)),
                    bool(loc.get("urgent", False)),
                )
                for loc in _req(p, "locations", f"process {name!r}")
            )
            edges = []
            for e in p.get("edges", []):
                where = f"process {name!r} edge"
                select = e.get("select")
                edges.append(
                    Edge(
                        _req(e, "source", where),
                        _req(e, "target", where),
                        ex.parse_guard(e.get("guard", "")),
                        parse_sync(e.get("sync")),
                        ex.parse_update(e.get("update", "")),
                        ex.parse_select(select) if select else None,
                    )
                )
            processes.append(Automaton(name, locations, tuple(edges)))
        return Network(tuple(processes), channels, variables, aliases)
    except ModelFileError:
        raise
    except (ModelError, ValueError, QuerySyntaxError) as err:
        raise ModelFileError(str(err)) from err


def parse_model(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ModelFileError(f"invalid JSON: {err}") from None
    return network_from_dict(doc)


def save_model(network: Network, path) -> None:
    Path(path).write_text(dump_model(network), encoding="utf-8")


def load_model(path) -> Network:
    return parse_model(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(automaton: Automaton) -> str:
    """Graphviz source for one automaton.

    Committed locations are drawn as double circles tagged ``C``, urgent ones
    tagged ``U``; the initial location is bold.
    """
    lines = [f"digraph {_q(automaton.name)} {{", "  rankdir=LR;"]
    for loc in automaton.locations:
        attrs = ["shape=doublecircle" if loc.committed else "shape=circle"]
        if loc.committed:
            attrs.append('xlabel="C"')
        elif loc.urgent:
            attrs.append('xlabel="U"')
        if loc.initial:
            attrs.append("style=bold")
        lines.append(f"  {_q(loc.name)} [{', '.join(attrs)}];")
    for e in automaton.edges:
        parts = []
        if e.select is not None:
            parts.append(ex.format_select(e.select))
        if not ex.is_true(e.guard):
            parts.append(ex.format_formula(e.guard))
        if e.sync is not None:
            parts.append(str(e.sync))
        if e.update:
            parts.append(ex.format_update(e.update))
        label = "\\n".join(p.replace("\\", "\\\\").replace('"', '\\"') for p in parts)
        lines.append(f'  {_q(e.source)} -> {_q(e.target)} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, path) -> list:
    """Write DOT files and return their paths.

    An automaton goes to ``path`` itself; a network writes one
    ``<process>.dot`` per process into the directory ``path``.
    """
    if isinstance(obj, Automaton):
        Path(path).write_text(to_dot(obj), encoding="utf-8")
        return [Path(path)]
    out_dir = Path(path)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for p in obj.processes:
        target = out_dir / f"{p.name}.dot"
        target.write_text(to_dot(p), encoding="utf-8")
        written.append(target)
    return written


# ---------------------------------------------------------------------------
# traces


def format_trace_text(network: Network, trace: Trace) -> str:
    lines = [f"trace: {len(trace.steps)} step(s)", f"initial: {format_config(network, trace.initial)}"]
    for k, (step, cfg) in enumerate(trace.steps, start=1):
        lines.append(f"{k}: {describe_step(network, step)}")
        lines.append(f"   -> {format_config(network, cfg)}")
    if trace.loop_start is not None:
        lines.append(f"loop: back to configuration {trace.loop_start}")
    if trace.deadlocked:
        lines.append("deadlock: no enabled transitions")
    return "\n".join(lines) + "\n"


def _config_to_dict(network, cfg):
    return {
        "locations": [p.locations[i].name for p, i in zip(network.processes, cfg.locations)],
        "values": {v.name: x for v, x in zip(network.variables, cfg.values)},
    }


def _config_from_dict(network, d):
    try:
        if len(d["locations"]) != len(network.processes):
            raise TraceError("configuration has the wrong number of locations")
        locs = tuple(p.location_index(name) for p, name in zip(network.processes, d["locations"]))
        values = tuple(int(d["values"][v.name]) for v in network.variables)
    except (KeyError, ModelError) as err:
        raise TraceError(f"bad configuration in trace: {err}") from None
    return Configuration(locs, values)


def _move_to_dict(network, mv):
    return {"process": network.processes[mv.process].name, "edge": mv.edge, "select": mv.select}


def _move_from_dict(network, d):
    try:
        return Move(network.process_index(d["process"]), int(d["edge"]), d.get("select"))
    except (KeyError, ModelError) as err:
        raise TraceError(f"bad move in trace: {err}") from None


def trace_to_dict(network: Network, trace: Trace) -> dict:
    return {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "processes": [p.name for p in network.processes],
        "initial": _config_to_dict(network, trace.initial),
        "steps": [
            {
                "kind": step.kind.value,
                "label": describe_step(network, step),
                "emitter": _move_to_dict(network, step.emitter),
                "receivers": [_move_to_dict(network, m) for m in step.receivers],
                "config": _config_to_dict(network, cfg),
            }
            for step, cfg in trace.steps
        ],
        "deadlocked": trace.deadlocked,
        "loop_start": trace.loop_start,
    }


def trace_from_dict(network: Network, doc: dict, check: bool = True) -> Trace:
    if doc.get("format") != TRACE_FORMAT or doc.get("version") != TRACE_VERSION:
        raise TraceError("not a supported trace document")
    if doc.get("processes") != [p.name for p in network.processes]:
        raise TraceError("trace was recorded on a different network")
    steps = []
    for s in doc.get("steps", []):
        step = Step(
            StepKind(s["kind"]),
            _move_from_dict(network, s["emitter"]),
            tuple(_move_from_dict(network, m) for m in s.get("receivers", [])),
        )
        steps.append((step, _config_from_dict(network, s["config"])))
    trace = Trace(
        _config_from_dict(network, doc["initial"]),
        tuple(steps),
        bool(doc.get("deadlocked", False)),
        doc.get("loop_start"),
    )
    if check:
        replay(network, trace)
    return trace


def format_trace(network: Network, trace: Trace, fmt: str = "text") -> str:
    if fmt == "text":
        return format_trace_text(network, trace)
    if fmt in ("json", "structured"):
        return json.dumps(trace_to_dict(network, trace), indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown trace format {fmt!r}")


def write_trace(network: Network, trace: Trace, path, fmt: str = "text") -> None:
    Path(path).write_text(format_trace(network, trace, fmt), encoding="utf-8")


def read_trace(network: Network, path) -> Trace:
    return trace_from_dict(network, json.loads(Path(path).read_text(encoding="utf-8")))


def default_output_dir() -> Path:
    return Path(os.environ.get("PRIVCHECK_OUTPUT_DIR", "."))
