"""Command-line interface.

Exit codes: 0 satisfied / all pass, 1 not satisfied / any failure,
2 usage, parse or model errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .checker import check, check_suite
from .errors import PrivcheckError
from .oracle import mismatches, run_oracle
from .semantics import format_config, initial_config, simulate, step_choices
from .synthesis import build_user_network


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _out_path(value, default_name):
    if value:
        return Path(value)
    return io.default_output_dir() / default_name


def cmd_build(args, out):
    records = io.load_records(args.records)
    network = build_user_network(records, args.user, intermediate=args.intermediate)
    path = _out_path(args.out, f"user_{args.user}.model")
    io.save_model(network, path)
    user = network.processes[0]
    print(
        f"wrote {path}: {len(network.processes)} processes, "
        f"user automaton with {len(user.locations)} locations and {len(user.edges)} edges",
        file=out,
    )
    return 0


def _print_verdict(network, verdict, args, out):
    print(f"{verdict.query.source}", file=out)
    print(verdict.label, file=out)
    print(f"states explored: {verdict.stats.states}, transitions: {verdict.stats.transitions}", file=out)
    if verdict.trace is not None and args.trace:
        kind = "witness" if verdict.satisfied else "counterexample"
        print(f"{kind}:", file=out)
        out.write(io.format_trace(network, verdict.trace, args.trace))
    if verdict.trace is not None and args.trace_out:
        fmt = "json" if str(args.trace_out).endswith(".json") else "text"
        io.write_trace(network, verdict.trace, args.trace_out, fmt)


def cmd_check(args, out):
    network = io.load_model(args.model)
    verdict = check(network, args.query)
    _print_verdict(network, verdict, args, out)
    return 0 if verdict.satisfied else 1


def read_suite(path) -> list:
    """One query per line; blank lines and ``#`` comments are skipped."""
    queries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            queries.append(line)
    return queries


def cmd_suite(args, out):
    network = io.load_model(args.model)
    verdicts = check_suite(network, read_suite(args.queries))
    width = max([len("Verdict")] + [len(v.label) for v in verdicts])
    print(f"{'No':>3}  {'Verdict':<{width}}  Query", file=out)
    for i, v in enumerate(verdicts, start=1):
        print(f"{i:>3}  {v.label:<{width}}  {v.query.source}", file=out)
    passed = sum(v.satisfied for v in verdicts)
    print(f"{passed}/{len(verdicts)} satisfied", file=out)
    return 0 if passed == len(verdicts) else 1


def interactive_step_loop(network, stdin, out) -> int:
    """Manual stepping driven by ``list``, ``take i``, ``reset`` and ``quit`` lines."""
    config = initial_config(network)

    def show():
        print(f"state: {format_config(network, config)}", file=out)

    def listing():
        choices = step_choices(network, config)
        if not choices:
            print("no enabled transitions (deadlock)", file=out)
        for c in choices:
            print(f"  [{c.index}] {c.label}", file=out)

    show()
    listing()
    for raw in stdin:
        words = raw.split()
        if not words:
            continue
        cmd = words[0].lower()
        if cmd in ("quit", "q", "exit"):
            break
        if cmd in ("list", "l"):
            listing()
        elif cmd in ("reset", "r"):
            config = initial_config(network)
            show()
            listing()
        elif cmd in ("take", "t") or cmd.isdigit():
            arg = words[0] if cmd.isdigit() else (words[1] if len(words) > 1 else "")
            choices = step_choices(network, config)
            if not choices:
                print("no enabled transitions", file=out)
                continue
            if not arg.isdigit() or int(arg) >= len(choices):
                print(f"invalid choice {arg!r}; pick 0..{len(choices) - 1}", file=out)
                continue
            chosen = choices[int(arg)]
            config = chosen.target
            print(f"took: {chosen.label}", file=out)
            show()
            listing()
        else:
            print("commands: list, take <i>, reset, quit", file=out)
    return 0


def cmd_simulate(args, out):
    network = io.load_model(args.model)
    if args.interactive:
        return interactive_step_loop(network, sys.stdin, out)
    trace = simulate(network, args.seed, args.steps)
    out.write(io.format_trace(network, trace, args.format))
    return 0


def cmd_export(args, out):
    network = io.load_model(args.model)
    target = _out_path(args.dot, "dot")
    for path in io.export_dot(network, target):
        print(f"wrote {path}", file=out)
    return 0


def cmd_oracle(args, out):
    records = io.records_for_user(io.load_records(args.records), args.user)
    if not records:
        raise PrivcheckError(f"no records for user {args.user!r}")
    network = build_user_network(records)
    rows = run_oracle(network, {r.triple for r in records if r.shared})
    bad = mismatches(rows)
    for r in bad:
        names = ", ".join(v.value for v in r.triple)
        print(f"MISMATCH ({names}): expected {r.expected}, model says {r.satisfied}", file=out)
    print(f"{len(rows)} triples checked, {sum(r.expected for r in rows)} shared, {len(bad)} mismatches", file=out)
    return 0 if not bad else 1


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="privcheck", description="Synthesize and verify personal privacy-disclosure models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="synthesize a user's network from records")
    p.add_argument("--records", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--out")
    p.add_argument("--intermediate", choices=("plain", "urgent", "committed"), default="plain")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", help="check one query")
    p.add_argument("--model", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--trace", nargs="?", const="text", choices=("text", "json"), help="print the witness/counterexample")
    p.add_argument("--trace-out", help="also write the trace to this file (.json for structured)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", help="check one query per line of a file")
    p.add_argument("--model", required=True)
    p.add_argument("--queries", required=True)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("simulate", help="random or interactive simulation")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--interactive", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="write Graphviz files, one per process")
    p.add_argument("--model", required=True)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("oracle", help="brute-force all 48 triples against the records")
    p.add_argument("--records", required=True)
    p.add_argument("--user", required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (PrivcheckError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
