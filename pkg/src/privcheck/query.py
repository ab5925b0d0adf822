"""Queries: one path quantifier over a state formula.

>>> q = parse_query("E<> (user.Share and information_type.Health)")
>>> q.quantifier
<Quantifier.EXISTS_EVENTUALLY: 'E<>'>
>>> format_query(q)
'E<> (user.Share and information_type.Health)'
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import expr as ex
from .errors import BindError, QuerySyntaxError
from .model import Network, eval_guard
from .semantics import Configuration, is_deadlock, valuation


class Quantifier(enum.Enum):
    EXISTS_EVENTUALLY = "E<>"
    FORALL_GLOBALLY = "A[]"
    EXISTS_GLOBALLY = "E[]"
    FORALL_EVENTUALLY = "A<>"


@dataclass(frozen=True)
class Query:
    quantifier: Quantifier
    formula: ex.Formula

    def __str__(self):
        return format_query(self)


def parse_query(text: str) -> Query:
    p = ex.Parser(text)
    if any(t.kind == "leadsto" for t in p.tokens):
        pos = next(t.pos for t in p.tokens if t.kind == "leadsto")
        raise QuerySyntaxError("unsupported operator '-->' (leads-to is not part of the query language)", text, pos)
    first = p.tok
    if first.kind != "quant":
        p.fail("expected a path quantifier (E<>, A[], E[] or A<>)")
    p.advance()
    formula = p.formula()
    p.expect_end()
    return Query(Quantifier(first.text), formula)


def format_query(query: Query) -> str:
    body = ex.format_formula(query.formula)
    if isinstance(query.formula, (ex.And, ex.Or)):
        body = f"({body})"
    return f"{query.quantifier.value} {body}"


def negate(formula):
    """Logical negation, cancelling a double ``not``."""
    if isinstance(formula, ex.Not):
        return formula.operand
    return ex.Not(formula)


# ---------------------------------------------------------------------------
# binding


@dataclass(frozen=True)
class BoundLocation:
    process: int
    location: int
    name: str  # "proc.Loc" as declared, for messages


@dataclass(frozen=True)
class BoundCompare:
    var: str
    op: str
    value: int


@dataclass(frozen=True)
class BoundQuery:
    quantifier: Quantifier
    formula: object
    source: Query


def _resolve_process(network: Network, name: str) -> int:
    names = [p.name for p in network.processes]
    if name in names:
        return names.index(name)
    target = network.alias_map.get(name)
    if target is not None and target in names:
        return names.index(target)
    raise BindError(f"unknown process {name!r}", names)


def _resolve_location(network: Network, pidx: int, process_alias: str, name: str) -> int:
    proc = network.processes[pidx]
    locs = [loc.name for loc in proc.locations]
    if name in locs:
        return locs.index(name)
    folded = [i for i, loc in enumerate(locs) if loc.lower() == name.lower()]
    if len(folded) == 1:
        return folded[0]
    if len(folded) > 1:
        raise BindError(f"location {name!r} of {proc.name!r} is ambiguous ignoring case", [locs[i] for i in folded])
    aliases = {a.lower(): b for a, b in network.aliases if "." in a}
    for prefix in dict.fromkeys((process_alias, proc.name)):
        target = aliases.get(f"{prefix}.{name}".lower())
        if target is not None:
            tproc, _, tloc = target.partition(".")
            if tproc == proc.name and tloc in locs:
                return locs.index(tloc)
    raise BindError(f"process {proc.name!r} has no location {name!r}", locs)


def bind_formula(formula, network: Network):
    if isinstance(formula, (ex.BoolConst, ex.DeadlockAtom)):
        return formula
    if isinstance(formula, ex.LocationAtom):
        pidx = _resolve_process(network, formula.process)
        lidx = _resolve_location(network, pidx, formula.process, formula.location)
        proc = network.processes[pidx]
        return BoundLocation(pidx, lidx, f"{proc.name}.{proc.locations[lidx].name}")
    if isinstance(formula, ex.Compare):
        names = [v.name for v in network.variables]
        if formula.var not in names:
            raise BindError(f"unknown variable {formula.var!r}", names)
        return BoundCompare(formula.var, formula.op, formula.value)
    if isinstance(formula, ex.Not):
        return ex.Not(bind_formula(formula.operand, network))
    if isinstance(formula, ex.And):
        return ex.And(tuple(bind_formula(f, network) for f in formula.operands))
    if isinstance(formula, ex.Or):
        return ex.Or(tuple(bind_formula(f, network) for f in formula.operands))
    raise TypeError(f"not a formula: {formula!r}")


def bind(query, network: Network) -> BoundQuery:
    """Resolve process, location and variable names against ``network``.

    Location names match case-insensitively; process and location aliases
    declared by the network are honored.
    """
    if isinstance(query, BoundQuery):
        return query
    if isinstance(query, str):
        query = parse_query(query)
    return BoundQuery(query.quantifier, bind_formula(query.formula, network), query)


# ---------------------------------------------------------------------------
# evaluation


def eval_formula(config: Configuration, network: Network, formula, _val=None) -> bool:
    if isinstance(formula, ex.BoolConst):
        return formula.value
    if isinstance(formula, BoundLocation):
        return config.locations[formula.process] == formula.location
    if isinstance(formula, BoundCompare):
        if _val is None:
            _val = valuation(network, config)
        return eval_guard(ex.Compare(formula.var, formula.op, formula.value), _val)
    if isinstance(formula, ex.DeadlockAtom):
        return is_deadlock(network, config)
    if isinstance(formula, ex.Not):
        return not eval_formula(config, network, formula.operand, _val)
    if isinstance(formula, ex.And):
        return all(eval_formula(config, network, f, _val) for f in formula.operands)
    if isinstance(formula, ex.Or):
        return any(eval_formula(config, network, f, _val) for f in formula.operands)
    if isinstance(formula, (ex.LocationAtom, ex.Compare)):
        raise BindError("formula must be bound to a network before evaluation")
    raise TypeError(f"not a bound formula: {formula!r}")
