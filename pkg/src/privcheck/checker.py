"""Explicit-state model checking of the four query forms.

Paths are maximal: infinite, or finite and ending in a deadlocked
configuration. ``E<>`` stops at the first satisfying configuration found
breadth-first, so witnesses are shortest. ``A[]`` scans the full reachable
set. ``E[]`` searches the subgraph of configurations satisfying the formula
for a reachable deadlock or cycle. ``A<>`` is decided by the least fixpoint
of "phi holds, or there is a successor and all successors are in the set".
The last two are computed independently so their duality can be tested.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Optional

from .errors import BindError, QuerySyntaxError
from .model import Network
from .query import BoundQuery, Quantifier, bind, eval_formula, negate
from .semantics import Trace, explore, initial_config, is_deadlock, successors, trace_from_parents


@dataclass(frozen=True)
class Stats:
    states: int
    transitions: int
    seconds: float


@dataclass(frozen=True)
class Verdict:
    query: BoundQuery
    satisfied: bool
    trace: Optional[Trace]
    stats: Stats

    @property
    def label(self) -> str:
        return "Satisfied" if self.satisfied else "Not Satisfied"

    @property
    def is_witness(self) -> bool:
        """True when ``trace`` shows the formula holding, False when it is a counterexample."""
        return self.satisfied


def _holds(network, formula):
    return lambda config: eval_formula(config, network, formula)


def find_reachable(network: Network, predicate):
    """BFS for the first configuration matching ``predicate``.

    Returns (trace or None, states visited, transitions expanded).
    """
    init = initial_config(network)
    if predicate(init):
        return Trace(init), 1, 0
    parent = {init: None}
    frontier = [init]
    transitions = 0
    i = 0
    while i < len(frontier):
        cfg = frontier[i]
        i += 1
        for step, nxt in successors(network, cfg):
            transitions += 1
            if nxt in parent:
                continue
            parent[nxt] = (cfg, step)
            if predicate(nxt):
                return trace_from_parents(parent, init, nxt), len(parent), transitions
            frontier.append(nxt)
    return None, len(parent), transitions


def _forall_globally(network, holds):
    space = explore(network)
    for cfg in space.order:
        if not holds(cfg):
            return False, space.trace_to(cfg), space
    return True, None, space


def _exists_globally(network, holds):
    """Evidence trace for a maximal path staying inside ``holds``, or None."""
    init = initial_config(network)
    if not holds(init):
        return None, 1, 0
    parent = {init: None}
    order = [init]
    inside = {}  # config -> successors that satisfy the formula
    transitions = 0
    i = 0
    while i < len(order):
        cfg = order[i]
        i += 1
        succ = successors(network, cfg)
        transitions += len(succ)
        if not succ:
            return trace_from_parents(parent, init, cfg, deadlocked=True), len(parent), transitions
        kept = []
        for step, nxt in succ:
            if not holds(nxt):
                continue
            kept.append((step, nxt))
            if nxt not in parent:
                parent[nxt] = (cfg, step)
                order.append(nxt)
        inside[cfg] = kept

    # prune configurations with no successor inside; whatever survives lies on or leads to a cycle
    alive = set(order)
    outdeg = {c: len({n for _, n in inside[c]}) for c in order}
    preds = {}
    for c in order:
        for n in {n for _, n in inside[c]}:
            preds.setdefault(n, []).append(c)
    queue = [c for c in order if outdeg[c] == 0]
    while queue:
        c = queue.pop()
        if c not in alive:
            continue
        alive.discard(c)
        for p in preds.get(c, ()):
            outdeg[p] -= 1
            if outdeg[p] == 0 and p in alive:
                queue.append(p)
    if not alive:
        return None, len(parent), transitions

    entry = next(c for c in order if c in alive)
    prefix = trace_from_parents(parent, init, entry)
    steps = list(prefix.steps)
    seen = {entry: len(steps)}
    cur = entry
    while True:
        step, nxt = next((s, n) for s, n in inside[cur] if n in alive)
        steps.append((step, nxt))
        if nxt in seen:
            return Trace(init, tuple(steps), loop_start=seen[nxt]), len(parent), transitions
        seen[nxt] = len(steps)
        cur = nxt


def _forall_eventually(network, holds):
    space = explore(network)
    good = {c for c in space.order if holds(c)}
    changed = True
    while changed:
        changed = False
        for c in space.order:
            if c in good:
                continue
            succ = space.edges[c]
            if succ and all(n in good for _, n in succ):
                good.add(c)
                changed = True
    return space.initial in good, space


def check(network: Network, query) -> Verdict:
    """Decide ``query`` (text, parsed or bound) on ``network``."""
    bound = bind(query, network)
    formula = bound.formula
    start = time.perf_counter()
    q = bound.quantifier
    if q is Quantifier.EXISTS_EVENTUALLY:
        trace, states, trans = find_reachable(network, _holds(network, formula))
        satisfied = trace is not None
    elif q is Quantifier.FORALL_GLOBALLY:
        satisfied, trace, space = _forall_globally(network, _holds(network, formula))
        states, trans = len(space.order), space.transitions
    elif q is Quantifier.EXISTS_GLOBALLY:
        trace, states, trans = _exists_globally(network, _holds(network, formula))
        satisfied = trace is not None
    else:
        satisfied, space = _forall_eventually(network, _holds(network, formula))
        states, trans = len(space.order), space.transitions
        trace = None
        if not satisfied:
            trace, _, _ = _exists_globally(network, _holds(network, negate(formula)))
    if trace is not None and trace.loop_start is None and not trace.deadlocked and is_deadlock(network, trace.final):
        trace = replace(trace, deadlocked=True)
    elapsed = time.perf_counter() - start
    return Verdict(bound, satisfied, trace, Stats(states, trans, elapsed))


def check_suite(network: Network, queries) -> list:
    """Bind every query up front, then check them in order."""
    bound = []
    for i, q in enumerate(queries):
        try:
            bound.append(bind(q, network))
        except (BindError, QuerySyntaxError) as err:
            err.index = i
            err.args = (f"query {i + 1}: {err.args[0]}",)
            raise
    return [check(network, b) for b in bound]


def deadlock_freedom(network: Network) -> Verdict:
    """``A[] not deadlock``, with a shortest path into a deadlock when violated."""
    return check(network, "A[] not deadlock")
