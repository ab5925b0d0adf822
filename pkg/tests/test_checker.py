import pytest

from privcheck.checker import check, check_suite, deadlock_freedom
from privcheck.errors import BindError, QuerySyntaxError
from privcheck.model import factor_triples
from privcheck.oracle import mismatches, run_oracle, share_query
from privcheck.semantics import replay
from privcheck.synthesis import DEFAULT_MAPPING

from .scenarios import (
    DAY_QUERY,
    SHARE_QUERIES,
    FACTOR_QUERIES,
    GOLDEN_SUITE,
    USER89_SHARED,
    user242_locations,
    user242_network,
)


def _user_path(network, trace):
    user = network.processes[0]
    return [user.locations[c.locations[0]].name for c in trace.configurations]


@pytest.mark.parametrize("i", range(len(GOLDEN_SUITE)))
def test_golden_verdicts(i, net89):
    query, expected = GOLDEN_SUITE[i]
    v = check(net89, query)
    assert v.satisfied is expected
    assert v.label == ("Satisfied" if expected else "Not Satisfied")


def test_counterexample_for_finance_expert_friend(net89):
    v = check(net89, GOLDEN_SUITE[2][0])
    assert not v.satisfied and replay(net89, v.trace)
    assert len(v.trace) == 3
    assert _user_path(net89, v.trace) == ["Idle", "s2", "s5", "Share"]


def test_witness_is_shortest(net89):
    v = check(net89, GOLDEN_SUITE[0][0])
    assert v.satisfied and len(v.trace) == 3
    assert _user_path(net89, v.trace)[-1] == "Share"


def test_share_queries_match_records(net89):
    for query in SHARE_QUERIES:
        assert check(net89, query).satisfied


@pytest.mark.parametrize("query,expected", FACTOR_QUERIES)
def test_observer_reachability(query, expected, net89):
    assert check(net89, query).satisfied is expected


def test_oracle_agrees_on_all_triples(net89):
    shared = {DEFAULT_MAPPING.decode(w) for w in USER89_SHARED}
    rows = run_oracle(net89, shared)
    assert len(rows) == 48
    assert sum(r.expected for r in rows) == 3
    assert mismatches(rows) == []


def test_share_query_text():
    t = factor_triples()[0]
    assert share_query(t) == (
        "E<> (user.Share and information_type.Health and trust_source.Family and recipient_role.Family)"
    )


def test_e_globally_and_a_eventually(net89):
    assert not check(net89, "E[] not user.Share").satisfied
    assert check(net89, "A<> user.Share").satisfied
    lasso = check(net89, "E[] true")
    assert lasso.satisfied and lasso.trace.loop_start is not None
    assert replay(net89, lasso.trace)


def test_a_eventually_counterexample_is_a_lasso(net89):
    v = check(net89, "A<> information_type.Finance")
    assert not v.satisfied
    assert v.trace.loop_start is not None and replay(net89, v.trace)
    configs = v.trace.configurations
    fin = net89.processes[1].location_index("Finance")
    assert all(c.locations[1] != fin for c in configs)


def test_user89_is_deadlock_free(net89):
    assert deadlock_freedom(net89).satisfied


def test_counter_exhaustion_deadlocks(net242):
    v = deadlock_freedom(net242)
    assert not v.satisfied
    assert v.trace is not None and replay(net242, v.trace)
    assert len(v.trace) == 10
    last = v.trace.final
    loc = user242_locations(net242.processes[0])["health_family"]
    assert net242.processes[0].locations[last.locations[0]].name == loc
    assert last.values[net242.variable_index("counter")] == 2


def test_repair_removes_deadlock(net242_fixed):
    assert deadlock_freedom(net242_fixed).satisfied


def test_weekday_guard_controls_reachability():
    assert check(user242_network(), DAY_QUERY).satisfied
    assert not check(user242_network(select=(6, 7)), DAY_QUERY).satisfied


def test_exists_not_deadlock_differs_from_deadlock_freedom(net242):
    # "some state is not deadlocked" holds even though a deadlock is reachable
    assert check(net242, "E<> not deadlock").satisfied
    assert not deadlock_freedom(net242).satisfied


def test_stats_are_reported(net89):
    v = check(net89, "A[] not deadlock")
    assert v.stats.states == 10 and v.stats.transitions > 0 and v.stats.seconds >= 0


def test_suite_runs_in_order(net89):
    verdicts = check_suite(net89, [q for q, _ in GOLDEN_SUITE])
    assert [v.satisfied for v in verdicts] == [e for _, e in GOLDEN_SUITE]
    assert check_suite(net89, []) == []


def test_suite_reports_offending_query(net89):
    with pytest.raises(BindError, match="query 2") as info:
        check_suite(net89, ["E<> user.Share", "E<> user.Nowhere"])
    assert info.value.index == 1
    with pytest.raises(QuerySyntaxError, match="query 1"):
        check_suite(net89, ["E<> (user.Share"])
