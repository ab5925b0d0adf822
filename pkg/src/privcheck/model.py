"""Domain types: disclosure factors, records, automata and networks.

Everything here is immutable. Automata and networks validate themselves on
construction, so any instance that exists is well formed.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import expr as ex
from .errors import BoundsError, ModelError


class InformationType(enum.Enum):
    HEALTH = "health"
    FINANCE = "finance"
    RELATIONSHIP = "relationship"


class TrustSource(enum.Enum):
    FAMILY = "family"
    FRIEND = "friend"
    EXPERT = "expert"
    SELF_SEARCH = "self"


class RecipientRole(enum.Enum):
    FAMILY = "family"
    FRIEND = "friend"
    COLLEAGUE = "colleague"
    ONLINE_SERVICE = "online"


FACTORS = (InformationType, TrustSource, RecipientRole)


def factor_triples():
    """All 48 (information type, trust source, recipient role) combinations, in enum order."""
    return list(itertools.product(InformationType, TrustSource, RecipientRole))


@dataclass(frozen=True)
class DisclosureRecord:
    user_id: str
    scenario_id: int
    info_type: InformationType
    trust_source: TrustSource
    recipient_role: RecipientRole
    shared: bool

    @property
    def triple(self):
        return (self.info_type, self.trust_source, self.recipient_role)


def check_consistent(records: Sequence[DisclosureRecord]) -> None:
    """Reject a user answering the same triple both ways."""
    seen = {}
    for rec in records:
        key = (rec.user_id, rec.triple)
        if key in seen and seen[key] != rec.shared:
            it, ts, rr = rec.triple
            raise ModelError(
                f"user {rec.user_id!r} has conflicting decisions for "
                f"({it.value}, {ts.value}, {rr.value})"
            )
        seen[key] = rec.shared


# ---------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class VariableDecl:
    name: str
    min: int
    max: int
    init: int = 0

    def __post_init__(self):
        if not self.min <= self.init <= self.max:
            raise ModelError(
                f"variable {self.name!r}: init {self.init} not in [{self.min}, {self.max}]"
            )


class ChannelKind(enum.Enum):
    BINARY = "binary"
    BROADCAST = "broadcast"


@dataclass(frozen=True)
class Channel:
    name: str
    kind: ChannelKind = ChannelKind.BINARY


@dataclass(frozen=True)
class Sync:
    """``channel!`` when ``emit`` else ``channel?``. An edge without sync uses ``None``."""

    channel: str
    emit: bool

    def __str__(self):
        return f"{self.channel}{'!' if self.emit else '?'}"


def Emit(channel: str) -> Sync:
    return Sync(channel, True)


def Receive(channel: str) -> Sync:
    return Sync(channel, False)


def parse_sync(text: Optional[str]) -> Optional[Sync]:
    if text is None or not text.strip():
        return None
    text = text.strip()
    if len(text) < 2 or text[-1] not in "!?" or not text[:-1].strip().isidentifier():
        raise ModelError(f"malformed sync label {text!r}")
    return Sync(text[:-1].strip(), text[-1] == "!")


@dataclass(frozen=True)
class Location:
    name: str
    initial: bool = False
    committed: bool = False
    urgent: bool = False

    def __post_init__(self):
        if self.committed and self.urgent:
            raise ModelError(f"location {self.name!r} cannot be both committed and urgent")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    guard: ex.Formula = ex.TRUE
    sync: Optional[Sync] = None
    update: tuple = ()
    select: Optional[ex.Select] = None

    def __post_init__(self):
        object.__setattr__(self, "update", tuple(self.update))

    @property
    def is_plain(self) -> bool:
        """No guard, update or select attached."""
        return ex.is_true(self.guard) and not self.update and self.select is None

    def label(self) -> str:
        parts = []
        if self.select is not None:
            parts.append(ex.format_select(self.select))
        if not ex.is_true(self.guard):
            parts.append(ex.format_formula(self.guard))
        if self.sync is not None:
            parts.append(str(self.sync))
        if self.update:
            parts.append(ex.format_update(self.update))
        return "; ".join(parts)


@dataclass(frozen=True)
class Automaton:
    name: str
    locations: tuple
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "edges", tuple(self.edges))
        names = [loc.name for loc in self.locations]
        if len(set(names)) != len(names):
            raise ModelError(f"automaton {self.name!r} has duplicate location names")
        initial = [loc.name for loc in self.locations if loc.initial]
        if len(initial) != 1:
            raise ModelError(
                f"automaton {self.name!r} must have exactly one initial location, has {len(initial)}"
            )
        known = set(names)
        for e in self.edges:
            for end in (e.source, e.target):
                if end not in known:
                    raise ModelError(f"automaton {self.name!r}: edge references unknown location {end!r}")

    @property
    def initial(self) -> Location:
        return next(loc for loc in self.locations if loc.initial)

    def location(self, name: str) -> Location:
        for loc in self.locations:
            if loc.name == name:
                return loc
        raise ModelError(f"automaton {self.name!r} has no location {name!r}")

    def location_index(self, name: str) -> int:
        for i, loc in enumerate(self.locations):
            if loc.name == name:
                return i
        raise ModelError(f"automaton {self.name!r} has no location {name!r}")


@dataclass(frozen=True)
class Network:
    """Parallel composition of automata over shared channels and integer variables.

    ``aliases`` maps alternative names used in queries to declared ones,
    either ``"proc_alias" -> "proc"`` or ``"proc.Loc_alias" -> "proc.Loc"``.
    """

    processes: tuple
    channels: tuple = ()
    variables: tuple = ()
    aliases: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "processes", tuple(self.processes))
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "variables", tuple(self.variables))
        aliases = self.aliases.items() if isinstance(self.aliases, Mapping) else self.aliases
        object.__setattr__(self, "aliases", tuple((str(a), str(b)) for a, b in aliases))
        self._validate()

    def _validate(self):
        names = [p.name for p in self.processes]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ModelError(f"duplicate process names: {', '.join(dup)}")
        chans = [c.name for c in self.channels]
        if len(set(chans)) != len(chans):
            raise ModelError("duplicate channel names")
        var_names = [v.name for v in self.variables]
        if len(set(var_names)) != len(var_names):
            raise ModelError("duplicate variable names")
        chans, var_names = set(chans), set(var_names)
        for p in self.processes:
            for e in p.edges:
                where = f"process {p.name!r} edge {e.source}->{e.target}"
                if e.sync is not None and e.sync.channel not in chans:
                    raise ModelError(f"{where}: undeclared channel {e.sync.channel!r}")
                used = ex.variables_of(e.guard)
                for a in e.update:
                    used |= {a.var} | a.expr.variables
                if e.select is not None:
                    used.add(e.select.var)
                missing = used - var_names
                if missing:
                    raise ModelError(f"{where}: undeclared variable(s) {', '.join(sorted(missing))}")

    # lookups ---------------------------------------------------------------

    def process_index(self, name: str) -> int:
        for i, p in enumerate(self.processes):
            if p.name == name:
                return i
        raise ModelError(f"no process named {name!r}")

    def process(self, name: str) -> Automaton:
        return self.processes[self.process_index(name)]

    def channel(self, name: str) -> Channel:
        for c in self.channels:
            if c.name == name:
                return c
        raise ModelError(f"no channel named {name!r}")

    def variable_index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise ModelError(f"no variable named {name!r}")

    @property
    def alias_map(self) -> dict:
        return dict(self.aliases)

    def replace_process(self, automaton: Automaton) -> "Network":
        idx = self.process_index(automaton.name)
        procs = list(self.processes)
        procs[idx] = automaton
        return Network(tuple(procs), self.channels, self.variables, self.aliases)


# ---------------------------------------------------------------------------
# guard evaluation and updates


def eval_guard(guard, valuation: Mapping[str, int]) -> bool:
    if isinstance(guard, ex.BoolConst):
        return guard.value
    if isinstance(guard, ex.Compare):
        try:
            left = valuation[guard.var]
        except KeyError:
            raise ModelError(f"guard references undeclared variable {guard.var!r}") from None
        return _compare(left, guard.op, guard.value)
    if isinstance(guard, ex.Not):
        return not eval_guard(guard.operand, valuation)
    if isinstance(guard, ex.And):
        return all(eval_guard(g, valuation) for g in guard.operands)
    if isinstance(guard, ex.Or):
        return any(eval_guard(g, valuation) for g in guard.operands)
    raise ModelError(f"{ex.format_formula(guard)!r} is not a guard expression")


def _compare(left: int, op: str, right: int) -> bool:
    if op == "==":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def apply_update(update, valuation: Mapping[str, int], decls) -> dict:
    """Apply assignments left to right; later ones see earlier results."""
    if isinstance(decls, Mapping):
        by_name = dict(decls)
    else:
        by_name = {d.name: d for d in decls}
    out = dict(valuation)
    for a in update:
        decl = by_name.get(a.var)
        if decl is None:
            raise ModelError(f"update assigns undeclared variable {a.var!r}")
        try:
            value = a.expr.evaluate(out)
        except KeyError as exc:
            raise ModelError(f"update reads undeclared variable {exc.args[0]!r}") from None
        if not decl.min <= value <= decl.max:
            raise BoundsError(a.var, value, decl.min, decl.max)
        out[a.var] = value
    return out
