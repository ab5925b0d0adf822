"""From disclosure records to a composed network of automata.

The behavioral automaton of one user accepts exactly the three-symbol words
``[information type][trust source][recipient role]`` of the situations they
chose to share in. Three observer automata listen to the channels the
behavioral model emits on and record the factor values of the current
disclosure until the ``done`` broadcast returns them to their hubs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

from .. import expr as ex
from ..errors import ModelError, SynthesisError
from ..model import (
    Automaton,
    Channel,
    ChannelKind,
    DisclosureRecord,
    Edge,
    Emit,
    InformationType,
    Location,
    Network,
    RecipientRole,
    Receive,
    Sync,
    TrustSource,
    check_consistent,
)
from . import regex as rx
from .automata import Dfa, compile_regex, determinize, minimize


def _default_info():
    return {InformationType.HEALTH: "h", InformationType.FINANCE: "f", InformationType.RELATIONSHIP: "r"}


def _default_trust():
    return {
        TrustSource.FAMILY: "A",
        TrustSource.FRIEND: "B",
        TrustSource.EXPERT: "C",
        TrustSource.SELF_SEARCH: "D",
    }


def _default_recipient():
    return {
        RecipientRole.FAMILY: "a",
        RecipientRole.FRIEND: "b",
        RecipientRole.COLLEAGUE: "c",
        RecipientRole.ONLINE_SERVICE: "d",
    }


def _default_channels():
    return {
        "h": "health",
        "f": "finance",
        "r": "relationship",
        "A": "t_family",
        "B": "t_friend",
        "C": "t_expert",
        "D": "t_self",
        "a": "r_family",
        "b": "r_friend",
        "c": "r_colleague",
        "d": "r_online",
    }


@dataclass(frozen=True, eq=False)
class SymbolMapping:
    """Factor value <-> alphabet symbol <-> channel name."""

    info: Mapping = field(default_factory=_default_info)
    trust: Mapping = field(default_factory=_default_trust)
    recipient: Mapping = field(default_factory=_default_recipient)
    channels: Mapping = field(default_factory=_default_channels)
    done: str = "done"

    def __post_init__(self):
        for enum_cls, table in ((InformationType, self.info), (TrustSource, self.trust), (RecipientRole, self.recipient)):
            if set(table) != set(enum_cls):
                raise ModelError(f"symbol mapping must cover every {enum_cls.__name__}")
        symbols = self.alphabet
        if len(set(symbols)) != len(symbols) or any(len(s) != 1 for s in symbols):
            raise ModelError("factor symbols must be distinct single characters")
        if set(self.channels) != set(symbols):
            raise ModelError("every symbol needs exactly one channel")
        names = list(self.channels.values()) + [self.done]
        if len(set(names)) != len(names):
            raise ModelError("channel names must be distinct")

    @property
    def alphabet(self) -> tuple:
        return (
            tuple(self.info[v] for v in InformationType)
            + tuple(self.trust[v] for v in TrustSource)
            + tuple(self.recipient[v] for v in RecipientRole)
        )

    def position(self, symbol: str) -> int:
        """0 for information-type symbols, 1 for trust source, 2 for recipient role."""
        for pos, table in enumerate((self.info, self.trust, self.recipient)):
            if symbol in table.values():
                return pos
        raise SynthesisError(f"symbol {symbol!r} is not in the alphabet")

    def encode(self, triple) -> str:
        it, ts, rr = triple
        return self.info[it] + self.trust[ts] + self.recipient[rr]

    def decode(self, word: str):
        if len(word) != 3:
            raise SynthesisError(f"word {word!r} must have exactly three symbols")
        tables = (self.info, self.trust, self.recipient)
        out = []
        for symbol, table in zip(word, tables):
            match = [k for k, v in table.items() if v == symbol]
            if not match:
                raise SynthesisError(f"word {word!r}: symbol {symbol!r} in the wrong position")
            out.append(match[0])
        return tuple(out)


DEFAULT_MAPPING = SymbolMapping()


def encode_record(record: DisclosureRecord, mapping: SymbolMapping = DEFAULT_MAPPING) -> str:
    if not record.shared:
        raise SynthesisError(
            f"scenario {record.scenario_id} of user {record.user_id!r} was not shared; "
            "only positive behavior is modeled"
        )
    return mapping.encode(record.triple)


def build_union_regex(words: Iterable[str], mapping: SymbolMapping = DEFAULT_MAPPING):
    """Plain union of the words, ordered by alphabet position for determinism."""
    rank = {s: i for i, s in enumerate(mapping.alphabet)}
    unique = sorted(set(words), key=lambda w: [rank.get(c, len(rank)) for c in w])
    return rx.union(*(rx.word(w) for w in unique))


# ---------------------------------------------------------------------------
# DFA -> behavioral automaton


def _flags(kind: str) -> dict:
    if kind == "plain":
        return {}
    if kind == "committed":
        return {"committed": True}
    if kind == "urgent":
        return {"urgent": True}
    raise ValueError(f"intermediate location kind must be plain, urgent or committed, not {kind!r}")


def dfa_to_behavioral(
    dfa: Dfa,
    mapping: SymbolMapping = DEFAULT_MAPPING,
    process_name: str = "user",
    intermediate: str = "plain",
) -> Automaton:
    """Turn a DFA over three-symbol words into the emitting behavioral automaton.

    Locations are ``Idle`` (initial), ``s1``..``sN`` in BFS order from Idle and
    ``Share``; Idle and Share are committed. Each DFA transition on a symbol
    emits on that symbol's channel, and ``Share -> Idle`` broadcasts ``done``.
    """
    flags = _flags(intermediate)
    live = dfa.live_states()
    idle = Location("Idle", initial=True, committed=True)
    if dfa.initial not in live:
        return Automaton(process_name, (idle,), ())

    order = [dfa.initial]
    depth = {dfa.initial: 0}
    i = 0
    while i < len(order):
        s = order[i]
        for symbol, t in dfa.successors(s):
            if t not in live:
                continue
            if mapping.position(symbol) != depth[s]:
                raise SynthesisError(
                    f"symbol {symbol!r} appears at position {depth[s] + 1} of an accepted word"
                )
            if t not in depth:
                depth[t] = depth[s] + 1
                order.append(t)
            elif depth[t] != depth[s] + 1:
                raise SynthesisError("accepted words must all have length 3")
        i += 1
    for s in order:
        if s in dfa.accepting and depth[s] != 3:
            raise SynthesisError(f"DFA accepts a word of length {depth[s]}, expected 3")
        if depth[s] == 3 and s not in dfa.accepting:
            raise SynthesisError("DFA accepts words longer than 3 symbols")
    finals = [s for s in order if s in dfa.accepting]
    if len(finals) != 1:
        raise SynthesisError("DFA must be minimal (single accepting state)")

    names = {dfa.initial: "Idle", finals[0]: "Share"}
    count = 0
    for s in order:
        if s not in names:
            count += 1
            names[s] = f"s{count}"
    locations = [idle]
    locations += [Location(names[s], **flags) for s in order if names[s] not in ("Idle", "Share")]
    locations.append(Location("Share", committed=True))

    edges = []
    for s in order:
        for symbol, t in dfa.successors(s):
            if t in live:
                edges.append(Edge(names[s], names[t], sync=Emit(mapping.channels[symbol])))
    edges.append(Edge("Share", "Idle", sync=Emit(mapping.done)))
    return Automaton(process_name, tuple(locations), tuple(edges))


def synthesize_behavior(
    words: Iterable[str],
    mapping: SymbolMapping = DEFAULT_MAPPING,
    process_name: str = "user",
    intermediate: str = "plain",
) -> Automaton:
    words = list(words)
    for w in words:
        mapping.decode(w)
    nfa = compile_regex(build_union_regex(words, mapping), mapping.alphabet)
    return dfa_to_behavioral(minimize(determinize(nfa)), mapping, process_name, intermediate)


# ---------------------------------------------------------------------------
# observers


@dataclass(frozen=True)
class ObserverSpec:
    process: str
    hub: str
    factor: type
    spokes: Mapping


OBSERVERS = {
    "info_type": ObserverSpec(
        "information_type",
        "Information_Type",
        InformationType,
        {
            InformationType.HEALTH: "Health",
            InformationType.FINANCE: "Finance",
            InformationType.RELATIONSHIP: "Relationship",
        },
    ),
    "trust_source": ObserverSpec(
        "trust_source",
        "Trust_Source",
        TrustSource,
        {
            TrustSource.FAMILY: "Family",
            TrustSource.FRIEND: "Friend",
            TrustSource.EXPERT: "Expert",
            TrustSource.SELF_SEARCH: "Self_Search",
        },
    ),
    "recipient_role": ObserverSpec(
        "recipient_role",
        "Recipient_Role",
        RecipientRole,
        {
            RecipientRole.FAMILY: "Family",
            RecipientRole.FRIEND: "Friend",
            RecipientRole.COLLEAGUE: "Colleague",
            RecipientRole.ONLINE_SERVICE: "Online_Service",
        },
    ),
}

# query spellings for the observer processes and spokes
DEFAULT_ALIASES = (
    ("info_type", "information_type"),
    ("trust_source.Self", "trust_source.Self_Search"),
    ("trust_source.SelfSearch", "trust_source.Self_Search"),
    ("recipient_role.Online", "recipient_role.Online_Service"),
    ("recipient_role.OnlineService", "recipient_role.Online_Service"),
)


def build_observer(kind: str, mapping: SymbolMapping = DEFAULT_MAPPING) -> Automaton:
    try:
        spec = OBSERVERS[kind]
    except KeyError:
        raise ModelError(f"unknown observer kind {kind!r}; expected one of {', '.join(OBSERVERS)}") from None
    table = {InformationType: mapping.info, TrustSource: mapping.trust, RecipientRole: mapping.recipient}[spec.factor]
    locations = [Location(spec.hub, initial=True)]
    locations += [Location(spec.spokes[v]) for v in spec.factor]
    edges = [Edge(spec.hub, spec.spokes[v], sync=Receive(mapping.channels[table[v]])) for v in spec.factor]
    edges += [Edge(spec.spokes[v], spec.hub, sync=Receive(mapping.done)) for v in spec.factor]
    return Automaton(spec.process, tuple(locations), tuple(edges))


def observer_location(kind: str, value) -> tuple:
    """(process, location) naming the spoke that records ``value``."""
    spec = OBSERVERS[kind]
    return spec.process, spec.spokes[value]


# ---------------------------------------------------------------------------
# editing automata


def _select_edges(automaton: Automaton, selector) -> list:
    if len(selector) not in (2, 3):
        raise ModelError("edge selector is (source, target) or (source, target, channel)")
    source, target = selector[0], selector[1]
    channel = selector[2] if len(selector) == 3 else None
    found = [
        i
        for i, e in enumerate(automaton.edges)
        if e.source == source
        and e.target == target
        and (channel is None or (e.sync is not None and e.sync.channel == channel))
    ]
    if not found:
        raise ModelError(f"automaton {automaton.name!r} has no edge matching {tuple(selector)}")
    if len(found) > 1:
        raise ModelError(
            f"edge selector {tuple(selector)} is ambiguous in {automaton.name!r}; add the channel name"
        )
    return found


def _as_guard(guard):
    return ex.parse_guard(guard) if isinstance(guard, str) else guard


def _as_update(update):
    return ex.parse_update(update) if isinstance(update, str) else tuple(update)


def _as_select(select):
    if select is None or isinstance(select, ex.Select):
        return select
    if isinstance(select, str):
        return ex.parse_select(select)
    return ex.Select(*select)


def attach_guard(
    automaton: Automaton,
    edge_selector: Sequence[str],
    guard=ex.TRUE,
    update=(),
    select=None,
    *,
    replace_existing: bool = False,
) -> Automaton:
    """Put a guard, update and/or select binding on one plain edge.

    Guards and updates may be given as expression strings.
    """
    (idx,) = _select_edges(automaton, edge_selector)
    old = automaton.edges[idx]
    if not old.is_plain and not replace_existing:
        raise ModelError(
            f"edge {old.source}->{old.target} already carries '{old.label()}'; pass replace_existing=True"
        )
    new = replace(old, guard=_as_guard(guard), update=_as_update(update), select=_as_select(select))
    edges = list(automaton.edges)
    edges[idx] = new
    return Automaton(automaton.name, automaton.locations, tuple(edges))


def add_edge(
    automaton: Automaton,
    source: str,
    target: str,
    guard=ex.TRUE,
    sync: Optional[Sync] = None,
    update=(),
    select=None,
) -> Automaton:
    for name in (source, target):
        automaton.location(name)
    edge = Edge(source, target, _as_guard(guard), sync, _as_update(update), _as_select(select))
    if edge in automaton.edges:
        raise ModelError(f"automaton {automaton.name!r} already has an identical edge {source}->{target}")
    return Automaton(automaton.name, automaton.locations, automaton.edges + (edge,))


# ---------------------------------------------------------------------------
# composition


def default_channels(mapping: SymbolMapping = DEFAULT_MAPPING) -> tuple:
    chans = [Channel(mapping.channels[s]) for s in mapping.alphabet]
    chans.append(Channel(mapping.done, ChannelKind.BROADCAST))
    return tuple(chans)


def assemble_network(
    behavioral: Automaton,
    observers: Sequence[Automaton] = (),
    variables=(),
    channels=None,
    aliases=None,
    mapping: SymbolMapping = DEFAULT_MAPPING,
) -> Network:
    """Compose ``behavioral || observers...`` in that order.

    ``channels`` defaults to the mapping's factor channels plus the ``done``
    broadcast. ``aliases`` defaults to the observer aliases whose targets
    exist in the network.
    """
    if channels is None:
        channels = default_channels(mapping)
    for c in channels:
        if c.name == mapping.done and c.kind is not ChannelKind.BROADCAST:
            raise ModelError(f"channel {mapping.done!r} must be a broadcast channel")
    processes = (behavioral, *observers)
    if aliases is None:
        present = {p.name for p in processes}
        aliases = tuple((a, b) for a, b in DEFAULT_ALIASES if b.split(".")[0] in present)
    return Network(processes, tuple(channels), tuple(variables), tuple(aliases))


def shared_words(records: Iterable[DisclosureRecord], mapping: SymbolMapping = DEFAULT_MAPPING) -> list:
    return [encode_record(r, mapping) for r in records if r.shared]


def build_user_network(
    records: Sequence[DisclosureRecord],
    user_id=None,
    mapping: SymbolMapping = DEFAULT_MAPPING,
    observers: bool = True,
    intermediate: str = "plain",
) -> Network:
    """Synthesize ``User || Information_Type || Trust_Source || Recipient_Role`` for one user."""
    if user_id is not None:
        records = [r for r in records if str(r.user_id) == str(user_id)]
        if not records:
            raise SynthesisError(f"no records for user {user_id!r}")
    else:
        users = {r.user_id for r in records}
        if len(users) > 1:
            raise SynthesisError("records of several users given; pass user_id")
    check_consistent(records)
    behavioral = synthesize_behavior(shared_words(records, mapping), mapping, "user", intermediate)
    obs = [build_observer(k, mapping) for k in OBSERVERS] if observers else []
    return assemble_network(behavioral, obs, mapping=mapping)
