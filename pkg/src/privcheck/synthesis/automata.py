"""Thompson NFAs, subset construction and Hopcroft minimization.

DFAs are partial: a missing ``(state, symbol)`` entry sends the word to an
implicit dead state that is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from . import regex as rx


@dataclass(frozen=True)
class Nfa:
    num_states: int
    alphabet: tuple
    transitions: Mapping  # (state, symbol or None) -> frozenset of states
    initial: int
    accepting: frozenset

    def closure(self, states) -> frozenset:
        stack = list(states)
        seen = set(stack)
        while stack:
            s = stack.pop()
            for t in self.transitions.get((s, None), ()):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def move(self, states, symbol) -> frozenset:
        out = set()
        for s in states:
            out |= self.transitions.get((s, symbol), frozenset())
        return self.closure(out)

    def accepts(self, word) -> bool:
        current = self.closure({self.initial})
        for symbol in word:
            current = self.move(current, symbol)
            if not current:
                return False
        return bool(current & self.accepting)


@dataclass(frozen=True)
class Dfa:
    num_states: int
    alphabet: tuple
    transitions: Mapping  # (state, symbol) -> state
    initial: int
    accepting: frozenset

    def step(self, state, symbol) -> Optional[int]:
        return self.transitions.get((state, symbol))

    def accepts(self, word) -> bool:
        state = self.initial
        for symbol in word:
            state = self.transitions.get((state, symbol))
            if state is None:
                return False
        return state in self.accepting

    def successors(self, state):
        """(symbol, target) pairs in alphabet order."""
        for symbol in self.alphabet:
            target = self.transitions.get((state, symbol))
            if target is not None:
                yield symbol, target

    def bfs_order(self) -> list:
        order = [self.initial]
        seen = {self.initial}
        i = 0
        while i < len(order):
            for _, t in self.successors(order[i]):
                if t not in seen:
                    seen.add(t)
                    order.append(t)
            i += 1
        return order

    def canonical(self) -> "Dfa":
        """Renumber reachable states in BFS order. Isomorphic DFAs become equal."""
        order = self.bfs_order()
        index = {s: i for i, s in enumerate(order)}
        trans = {}
        for s in order:
            for symbol, t in self.successors(s):
                trans[(index[s], symbol)] = index[t]
        return Dfa(
            len(order),
            self.alphabet,
            trans,
            0,
            frozenset(index[s] for s in order if s in self.accepting),
        )

    def live_states(self) -> set:
        """Reachable states from which an accepting state is reachable."""
        reach = set(self.bfs_order())
        reverse = {}
        for (s, _), t in self.transitions.items():
            reverse.setdefault(t, set()).add(s)
        co = set(self.accepting & reach)
        stack = list(co)
        while stack:
            t = stack.pop()
            for s in reverse.get(t, ()):
                if s not in co:
                    co.add(s)
                    stack.append(s)
        return reach & co


# ---------------------------------------------------------------------------
# Thompson construction


class _NfaBuilder:
    def __init__(self):
        self.n = 0
        self.trans = {}

    def new(self) -> int:
        self.n += 1
        return self.n - 1

    def add(self, s, symbol, t):
        self.trans.setdefault((s, symbol), set()).add(t)

    def build(self, node):
        """Return (start, end) of a fragment accepting ``node``'s language."""
        if isinstance(node, rx.EmptyLanguage):
            return self.new(), self.new()
        if isinstance(node, rx.Epsilon):
            s, e = self.new(), self.new()
            self.add(s, None, e)
            return s, e
        if isinstance(node, rx.Symbol):
            s, e = self.new(), self.new()
            self.add(s, node.symbol, e)
            return s, e
        if isinstance(node, rx.Concat):
            start, end = self.build(node.parts[0])
            for part in node.parts[1:]:
                s, e = self.build(part)
                self.add(end, None, s)
                end = e
            return start, end
        if isinstance(node, rx.Union):
            s, e = self.new(), self.new()
            for part in node.parts:
                ps, pe = self.build(part)
                self.add(s, None, ps)
                self.add(pe, None, e)
            return s, e
        if isinstance(node, rx.Star):
            s, e = self.new(), self.new()
            ps, pe = self.build(node.inner)
            self.add(s, None, ps)
            self.add(s, None, e)
            self.add(pe, None, ps)
            self.add(pe, None, e)
            return s, e
        raise TypeError(f"not a regex node: {node!r}")


def regex_symbols(node) -> set:
    if isinstance(node, rx.Symbol):
        return {node.symbol}
    if isinstance(node, (rx.Concat, rx.Union)):
        out = set()
        for p in node.parts:
            out |= regex_symbols(p)
        return out
    if isinstance(node, rx.Star):
        return regex_symbols(node.inner)
    return set()


def compile_regex(node, alphabet=None) -> Nfa:
    builder = _NfaBuilder()
    start, end = builder.build(node)
    if alphabet is None:
        alphabet = tuple(sorted(regex_symbols(node)))
    else:
        missing = regex_symbols(node) - set(alphabet)
        if missing:
            raise ValueError(f"regex uses symbols outside the alphabet: {sorted(missing)}")
    trans = {k: frozenset(v) for k, v in builder.trans.items()}
    return Nfa(builder.n, tuple(alphabet), trans, start, frozenset({end}))


# ---------------------------------------------------------------------------
# subset construction


def determinize(nfa: Nfa) -> Dfa:
    start = nfa.closure({nfa.initial})
    index = {start: 0}
    order = [start]
    trans = {}
    i = 0
    while i < len(order):
        subset = order[i]
        for symbol in nfa.alphabet:
            target = nfa.move(subset, symbol)
            if not target:
                continue
            if target not in index:
                index[target] = len(order)
                order.append(target)
            trans[(i, symbol)] = index[target]
        i += 1
    accepting = frozenset(j for j, subset in enumerate(order) if subset & nfa.accepting)
    return Dfa(len(order), nfa.alphabet, trans, 0, accepting)


# ---------------------------------------------------------------------------
# Hopcroft minimization


def minimize(dfa: Dfa) -> Dfa:
    """Minimal partial DFA over live states, in canonical BFS numbering."""
    live = dfa.live_states()
    if dfa.initial not in live:
        return Dfa(1, dfa.alphabet, {}, 0, frozenset())

    states = sorted(live)
    sink = -1
    universe = states + [sink]

    def delta(s, symbol):
        if s == sink:
            return sink
        t = dfa.transitions.get((s, symbol))
        return t if t in live else sink

    inverse = {}
    for s in universe:
        for symbol in dfa.alphabet:
            inverse.setdefault((delta(s, symbol), symbol), set()).add(s)

    final = frozenset(s for s in states if s in dfa.accepting)
    rest = frozenset(universe) - final
    partition = {final, rest} - {frozenset()}
    work = [min(partition, key=len)] if len(partition) == 2 else list(partition)
    while work:
        splitter = work.pop()
        for symbol in dfa.alphabet:
            pre = set()
            for t in splitter:
                pre |= inverse.get((t, symbol), set())
            if not pre:
                continue
            for block in list(partition):
                inside = block & pre
                outside = block - pre
                if not inside or not outside:
                    continue
                partition.remove(block)
                partition.add(inside)
                partition.add(outside)
                if block in work:
                    work.remove(block)
                    work.extend((inside, outside))
                else:
                    work.append(inside if len(inside) <= len(outside) else outside)

    block_of = {}
    for block in partition:
        for s in block:
            block_of[s] = block
    sink_block = block_of[sink]
    trans = {}
    for s in states:
        for symbol in dfa.alphabet:
            t = delta(s, symbol)
            if block_of[t] is not sink_block:
                trans[(block_of[s], symbol)] = block_of[t]
    # build on block objects, then renumber canonically
    blocks = sorted({block_of[s] for s in states}, key=lambda b: min(b))
    number = {b: i for i, b in enumerate(blocks)}
    quotient = Dfa(
        len(blocks),
        dfa.alphabet,
        {(number[b], a): number[t] for (b, a), t in trans.items()},
        number[block_of[dfa.initial]],
        frozenset(number[block_of[s]] for s in final),
    )
    return quotient.canonical()


def words_to_dfa(words, alphabet) -> Dfa:
    """Convenience: minimal DFA accepting exactly ``words``."""
    return minimize(determinize(compile_regex(rx.union(*(rx.word(w) for w in words)), alphabet)))
