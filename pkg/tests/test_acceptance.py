"""End-to-end acceptance criteria. Each criterion reports one PASS/FAIL line
in the terminal summary (see conftest.py)."""

import io as stdio
import random

import pytest

from privcheck import expr as ex
from privcheck import io
from privcheck.checker import check, check_suite, deadlock_freedom
from privcheck.cli import main
from privcheck.model import factor_triples
from privcheck.oracle import mismatches, run_oracle
from privcheck.query import Quantifier, Query
from privcheck.semantics import replay, simulate
from privcheck.synthesis import (
    DEFAULT_MAPPING,
    build_union_regex,
    compile_regex,
    determinize,
    minimize,
    parse_regex,
    words_to_dfa,
)

from .scenarios import (
    DATA,
    DAY_QUERY,
    SIGMA,
    SHARE_QUERIES,
    FACTOR_QUERIES,
    GOLDEN_SUITE,
    USER89_SHARED,
    all_strings,
    build_user_network_from_words,
    dfa_language,
    isomorphic,
    nfa_language,
    random_formula,
    random_network,
    random_words,
    user242_locations,
    user242_network,
)

acceptance = pytest.mark.acceptance


def _user_locations(network, trace):
    user = network.processes[0]
    return [user.locations[c.locations[0]].name for c in trace.configurations]


@acceptance("1", "user-89 golden suite")
def test_user89_golden_suite(net89):
    for v in check_suite(net89, SHARE_QUERIES):
        assert v.satisfied, v.query.source
        assert v.stats.seconds < 1.0
    verdicts = check_suite(net89, [q for q, _ in GOLDEN_SUITE])
    assert [v.satisfied for v in verdicts] == [True, False, False, True]
    assert all(v.stats.seconds < 1.0 and v.stats.states < 10_000 for v in verdicts)
    cx = verdicts[2].trace
    assert cx is not None and replay(net89, cx)
    path = _user_locations(net89, cx)
    assert len(path) == 4 and path[0] == "Idle" and path[-1] == "Share"
    assert all(name.startswith("s") for name in path[1:3])


@acceptance("2", "DFA pipeline: 7 states, exact language, isomorphic to factored form")
def test_dfa_pipeline():
    dfa = words_to_dfa(sorted(USER89_SHARED), SIGMA)
    assert dfa.num_states == 7 and len(dfa.live_states()) == 7
    accepted = {s for s in all_strings(4) if dfa.accepts(s)}
    assert accepted == USER89_SHARED
    factored = minimize(determinize(compile_regex(parse_regex("(rC+hA)a+fCb"), SIGMA)))
    assert isomorphic(dfa, factored)


@acceptance("3", "oracle equivalence on user 89 and 25 synthetic users")
def test_oracle_equivalence(net89):
    rows = run_oracle(net89, {DEFAULT_MAPPING.decode(w) for w in USER89_SHARED})
    assert len(rows) == 48 and mismatches(rows) == []
    rng = random.Random(20240)
    for _ in range(25):
        words = random_words(rng, rng.randint(1, 20))
        net = build_user_network_from_words(words)
        shared = {DEFAULT_MAPPING.decode(w) for w in words}
        rows = run_oracle(net, shared)
        assert [r.triple for r in rows] == factor_triples()
        assert mismatches(rows) == []


@acceptance("4", "user-242 guards: deadlock, repair, weekday select")
def test_user242_guards(net242, net242_fixed):
    v = deadlock_freedom(net242)
    assert not v.satisfied and replay(net242, v.trace) and v.trace.deadlocked
    last = v.trace.final
    user = net242.processes[0]
    assert user.locations[last.locations[0]].name == user242_locations(user)["health_family"]
    assert last.values[net242.variable_index("counter")] == 2
    assert deadlock_freedom(net242_fixed).satisfied
    assert check(net242, DAY_QUERY).satisfied
    assert not check(user242_network(select=(6, 7)), DAY_QUERY).satisfied


@acceptance("5", "observer reachability on user 89")
def test_factor_reachability(net89):
    got = [v.satisfied for v in check_suite(net89, [q for q, _ in FACTOR_QUERIES])]
    assert got == [e for _, e in FACTOR_QUERIES]
    satisfied = {q for (q, _), ok in zip(FACTOR_QUERIES, got) if ok}
    assert len(satisfied) == 7


PROPERTY_TITLE = "property suites: duality, replay, language preservation, observer reset"


@acceptance("6", PROPERTY_TITLE)
def test_duality_and_replay():
    for i in range(500):
        rng = random.Random(i)
        net = random_network(rng)
        phi = random_formula(rng, net)
        neg = ex.Not(phi)
        verdicts = {q: check(net, Query(q, f)) for q, f in [
            (Quantifier.EXISTS_EVENTUALLY, phi),
            (Quantifier.FORALL_GLOBALLY, neg),
            (Quantifier.FORALL_EVENTUALLY, phi),
            (Quantifier.EXISTS_GLOBALLY, neg),
        ]}
        assert verdicts[Quantifier.EXISTS_EVENTUALLY].satisfied != verdicts[Quantifier.FORALL_GLOBALLY].satisfied, i
        assert verdicts[Quantifier.FORALL_EVENTUALLY].satisfied != verdicts[Quantifier.EXISTS_GLOBALLY].satisfied, i
        for v in verdicts.values():
            if v.trace is not None:
                assert replay(net, v.trace)
        assert replay(net, simulate(net, i, 25))


@acceptance("6", PROPERTY_TITLE)
def test_language_preservation():
    strings = list(all_strings(4))
    rng = random.Random(7)
    for _ in range(200):
        words = random_words(rng)
        nfa = compile_regex(build_union_regex(words), SIGMA)
        dfa = determinize(nfa)
        mini = minimize(dfa)
        expected = {s for s in strings if s in words}
        assert nfa_language(nfa, 4) == expected
        assert dfa_language(dfa, 4) == expected
        assert dfa_language(mini, 4) == expected


@acceptance("6", PROPERTY_TITLE)
def test_observer_reset(net89):
    hubs = [p.initial.name for p in net89.processes[1:]]
    done_steps = 0
    for seed in range(5):
        trace = simulate(net89, seed, 1000)
        assert len(trace) == 1000 and replay(net89, trace)
        for step, cfg in trace.steps:
            emitter = net89.processes[step.emitter.process].edges[step.emitter.edge]
            if emitter.sync.channel == "done":
                done_steps += 1
                names = [p.locations[i].name for p, i in zip(net89.processes[1:], cfg.locations[1:])]
                assert names == hubs
    assert done_steps >= 5 * 1000 // 4


def _cli(*argv):
    out = stdio.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def _cli_round(base):
    base.mkdir()
    records = str(DATA / "user89.csv")
    model = base / "m.model"
    queries = base / "q.txt"
    queries.write_text("\n".join(q for q, _ in GOLDEN_SUITE) + "\n")
    outputs = [
        _cli("build", "--records", records, "--user", "89", "--out", str(model))[1].replace(str(base), "<dir>"),
        _cli("check", "--model", str(model), "--query", GOLDEN_SUITE[2][0], "--trace")[1],
        _cli("check", "--model", str(model), "--query", GOLDEN_SUITE[0][0], "--trace", "json")[1],
        _cli("suite", "--model", str(model), "--queries", str(queries))[1],
        _cli("export", "--model", str(model), "--dot", str(base / "dot"))[1].replace(str(base), "<dir>"),
        _cli("simulate", "--model", str(model), "--seed", "11", "--steps", "50")[1],
        _cli("oracle", "--records", records, "--user", "89")[1],
    ]
    files = {p.relative_to(base).as_posix(): p.read_bytes() for p in sorted(base.rglob("*")) if p.is_file()}
    return outputs, files


@acceptance("7", "determinism of build/check/suite/export/simulate")
def test_determinism(tmp_path):
    first = _cli_round(tmp_path / "a")
    second = _cli_round(tmp_path / "b")
    assert first == second
    assert len(first[1]) == 6  # model, query file, four DOT files
    other_seed = _cli("simulate", "--model", str(tmp_path / "a" / "m.model"), "--seed", "12", "--steps", "50")[1]
    assert other_seed != first[0][5]
