"""Untimed operational semantics of a network of automata.

A configuration is a location vector plus a valuation. One global step is
an internal move, a binary handshake (one emitter, one receiver) or a
broadcast (one emitter plus every process that can receive; processes that
cannot receive do not block). When any process sits in a committed location
only steps involving a committed process may fire. Urgent locations are
recorded but inert, since no time passes in this semantics.

Select bindings assign the selected value to their variable before the
edge's guard is evaluated and before its update runs. Updates are applied
emitter first, then receivers in process order.
"""

from __future__ import annotations

import enum
import itertools
import random
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

from .errors import BoundsError, ModelError, TraceError
from .model import ChannelKind, Network, apply_update, eval_guard


@dataclass(frozen=True, order=True)
class Configuration:
    locations: tuple
    values: tuple = ()


@dataclass(frozen=True)
class Move:
    """One process taking one of its edges, with the chosen select value."""

    process: int
    edge: int
    select: Optional[int] = None


class StepKind(enum.Enum):
    INTERNAL = "internal"
    BINARY = "binary"
    BROADCAST = "broadcast"


@dataclass(frozen=True)
class Step:
    kind: StepKind
    emitter: Move
    receivers: tuple = ()

    @property
    def moves(self) -> tuple:
        return (self.emitter,) + self.receivers


@dataclass(frozen=True)
class Trace:
    """A path from ``initial``; ``steps`` holds (Step, resulting Configuration) pairs.

    ``loop_start`` marks a lasso: the final configuration equals
    ``configurations[loop_start]``.
    """

    initial: Configuration
    steps: tuple = ()
    deadlocked: bool = False
    loop_start: Optional[int] = None

    @property
    def configurations(self) -> list:
        return [self.initial] + [c for _, c in self.steps]

    @property
    def final(self) -> Configuration:
        return self.steps[-1][1] if self.steps else self.initial

    def __len__(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# per-network index, cached by identity


class _Index:
    def __init__(self, network: Network):
        self.network = network
        self.loc_index = []
        self.out_edges = []  # [process][location] -> [(edge_idx, edge, target_idx)]
        self.committed = []
        for proc in network.processes:
            names = {loc.name: i for i, loc in enumerate(proc.locations)}
            self.loc_index.append(names)
            out = [[] for _ in proc.locations]
            for j, e in enumerate(proc.edges):
                out[names[e.source]].append((j, e, names[e.target]))
            self.out_edges.append(out)
            self.committed.append([loc.committed for loc in proc.locations])
        self.channel_kind = {c.name: c.kind for c in network.channels}
        self.var_names = [v.name for v in network.variables]
        self.decls = {v.name: v for v in network.variables}


_CACHE: "OrderedDict[int, _Index]" = OrderedDict()


def _index(network: Network) -> _Index:
    key = id(network)
    idx = _CACHE.get(key)
    if idx is not None and idx.network is network:
        _CACHE.move_to_end(key)
        return idx
    idx = _Index(network)
    _CACHE[key] = idx
    if len(_CACHE) > 64:
        _CACHE.popitem(last=False)
    return idx


def valuation(network: Network, config: Configuration) -> dict:
    return {v.name: x for v, x in zip(network.variables, config.values)}


# ---------------------------------------------------------------------------
# successors


def initial_config(network: Network) -> Configuration:
    locs = tuple(proc.location_index(proc.initial.name) for proc in network.processes)
    return Configuration(locs, tuple(v.init for v in network.variables))


def _enabled(idx: _Index, config: Configuration, val: dict, p: int):
    for j, e, target in idx.out_edges[p][config.locations[p]]:
        if e.select is None:
            if eval_guard(e.guard, val):
                yield j, e, None
        else:
            for v in e.select.values():
                bound = dict(val)
                bound[e.select.var] = v
                if eval_guard(e.guard, bound):
                    yield j, e, v


def _fire(idx: _Index, config: Configuration, val: dict, step: Step) -> Configuration:
    locs = list(config.locations)
    current = val
    network = idx.network
    try:
        for mv in step.moves:
            _, e, target = next(t for t in idx.out_edges[mv.process][config.locations[mv.process]] if t[0] == mv.edge)
            if mv.select is not None:
                decl = idx.decls[e.select.var]
                if not decl.min <= mv.select <= decl.max:
                    raise BoundsError(decl.name, mv.select, decl.min, decl.max)
                current = dict(current)
                current[e.select.var] = mv.select
            if e.update:
                current = apply_update(e.update, current, idx.decls)
            locs[mv.process] = target
    except BoundsError as err:
        err.step = step
        err.args = (f"{err.args[0]} while firing {describe_step(network, step)}",)
        raise
    return Configuration(tuple(locs), tuple(current[n] for n in idx.var_names))


def successors(network: Network, config: Configuration) -> list:
    """All enabled (Step, Configuration) pairs, in a deterministic order."""
    idx = _index(network)
    val = valuation(network, config)
    n = len(network.processes)
    enabled = [list(_enabled(idx, config, val, p)) for p in range(n)]
    committed = [idx.committed[p][config.locations[p]] for p in range(n)]
    any_committed = any(committed)

    out = []
    for p in range(n):
        for j, e, v in enabled[p]:
            mover = Move(p, j, v)
            if e.sync is None:
                candidates = [Step(StepKind.INTERNAL, mover)]
            elif not e.sync.emit:
                continue
            else:
                ch = e.sync.channel
                receivers = [
                    [Move(q, k, w) for k, f, w in enabled[q] if f.sync is not None and not f.sync.emit and f.sync.channel == ch]
                    if q != p
                    else []
                    for q in range(n)
                ]
                if idx.channel_kind[ch] is ChannelKind.BINARY:
                    candidates = [Step(StepKind.BINARY, mover, (r,)) for rs in receivers for r in rs]
                else:
                    groups = [rs for rs in receivers if rs]
                    candidates = [Step(StepKind.BROADCAST, mover, combo) for combo in itertools.product(*groups)]
            for step in candidates:
                if any_committed and not any(committed[m.process] for m in step.moves):
                    continue
                out.append((step, _fire(idx, config, val, step)))
    return out


def is_deadlock(network: Network, config: Configuration) -> bool:
    return not successors(network, config)


def fire(network: Network, config: Configuration, step: Step) -> Configuration:
    """Apply ``step`` to ``config``; the step must be enabled there."""
    for s, c in successors(network, config):
        if s == step:
            return c
    raise ModelError(f"step {describe_step(network, step)} is not enabled")


# ---------------------------------------------------------------------------
# exploration


@dataclass
class Exploration:
    initial: Configuration
    order: list  # BFS discovery order
    parent: dict  # config -> (parent config, Step) or None for the initial one
    layer: dict  # config -> BFS depth
    edges: dict  # config -> list of (Step, Configuration)
    transitions: int = 0

    @property
    def reachable(self) -> set:
        return set(self.order)

    def trace_to(self, target: Configuration, deadlocked: bool = False) -> Trace:
        return trace_from_parents(self.parent, self.initial, target, deadlocked)


def trace_from_parents(parent: dict, initial: Configuration, target: Configuration, deadlocked=False) -> Trace:
    steps = []
    cur = target
    while parent[cur] is not None:
        prev, step = parent[cur]
        steps.append((step, cur))
        cur = prev
    steps.reverse()
    return Trace(initial, tuple(steps), deadlocked)


def explore(network: Network) -> Exploration:
    """Breadth-first exploration of the whole reachable state space."""
    init = initial_config(network)
    order = [init]
    parent = {init: None}
    layer = {init: 0}
    edges = {}
    transitions = 0
    i = 0
    while i < len(order):
        cfg = order[i]
        succ = successors(network, cfg)
        edges[cfg] = succ
        transitions += len(succ)
        for step, nxt in succ:
            if nxt not in parent:
                parent[nxt] = (cfg, step)
                layer[nxt] = layer[cfg] + 1
                order.append(nxt)
        i += 1
    return Exploration(init, order, parent, layer, edges, transitions)


# ---------------------------------------------------------------------------
# replay, simulation and stepping


def replay(network: Network, trace: Trace) -> bool:
    """Check that every recorded step is enabled and leads to the recorded configuration."""
    if trace.initial != initial_config(network):
        raise TraceError("trace does not start at the initial configuration")
    cur = trace.initial
    for k, (step, recorded) in enumerate(trace.steps):
        for s, c in successors(network, cur):
            if s == step:
                if c != recorded:
                    raise TraceError(f"step {k}: recorded configuration differs from the replayed one")
                break
        else:
            raise TraceError(f"step {k}: {describe_step(network, step)} is not enabled")
        cur = recorded
    if trace.deadlocked and not is_deadlock(network, cur):
        raise TraceError("trace is flagged deadlocked but its final configuration has successors")
    if trace.loop_start is not None:
        configs = trace.configurations
        if not 0 <= trace.loop_start < len(configs) - 1 or configs[trace.loop_start] != cur:
            raise TraceError("lasso does not close on its loop start")
    return True


def simulate(network: Network, seed: int = 0, max_steps: int = 100) -> Trace:
    """Seeded random walk, choosing uniformly among successors."""
    rng = random.Random(seed)
    cur = initial_config(network)
    init = cur
    steps = []
    for _ in range(max_steps):
        succ = successors(network, cur)
        if not succ:
            return Trace(init, tuple(steps), deadlocked=True)
        step, cur = succ[rng.randrange(len(succ))]
        steps.append((step, cur))
    return Trace(init, tuple(steps), deadlocked=is_deadlock(network, cur))


@dataclass(frozen=True)
class Choice:
    index: int
    label: str
    step: Step
    target: Configuration


def step_choices(network: Network, config: Configuration) -> list:
    return [Choice(i, describe_step(network, s), s, c) for i, (s, c) in enumerate(successors(network, config))]


def take(network: Network, config: Configuration, index: int) -> Configuration:
    choices = successors(network, config)
    if not 0 <= index < len(choices):
        raise IndexError(f"choice {index} out of range (0..{len(choices) - 1})" if choices else "no enabled transitions")
    return choices[index][1]


# ---------------------------------------------------------------------------
# formatting


def format_config(network: Network, config: Configuration) -> str:
    locs = ", ".join(p.locations[i].name for p, i in zip(network.processes, config.locations))
    text = f"({locs})"
    if network.variables:
        text += " " + " ".join(f"{v.name}={x}" for v, x in zip(network.variables, config.values))
    return text


def _describe_move(network: Network, mv: Move) -> str:
    proc = network.processes[mv.process]
    e = proc.edges[mv.edge]
    text = f"{proc.name} {e.source} -> {e.target}"
    if mv.select is not None:
        text += f" [{e.select.var}={mv.select}]"
    return text


def describe_step(network: Network, step: Step) -> str:
    moves = " | ".join(_describe_move(network, m) for m in step.moves)
    if step.kind is StepKind.INTERNAL:
        return f"tau: {moves}"
    e = network.processes[step.emitter.process].edges[step.emitter.edge]
    suffix = " (broadcast)" if step.kind is StepKind.BROADCAST else ""
    return f"{e.sync.channel}{suffix}: {moves}"
