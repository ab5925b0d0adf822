"""Expression trees and their concrete syntax.

One grammar serves three clients: edge guards, edge updates and the
state formulas inside verification queries. Guards are formulas restricted
to integer comparisons; queries may additionally mention process locations
(``user.Share``) and the ``deadlock`` predicate.

Concrete syntax::

    formula  := disj
    disj     := conj (("or" | "||") conj)*
    conj     := unary (("and" | "&&") unary)*
    unary    := ("not" | "!") unary | atom
    atom     := "(" formula ")" | "true" | "false" | "deadlock"
              | IDENT "." IDENT | IDENT CMP INT | INT CMP IDENT
    update   := assign ("," assign)*
    assign   := IDENT (":=" | "=") linear
    linear   := ["-"] term (("+" | "-") term)*
    term     := INT ["*" IDENT] | IDENT

Keywords are case-insensitive, identifiers are not.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import QuerySyntaxError

CMP_OPS = ("==", "!=", "<", "<=", ">", ">=")
_FLIPPED = {"==": "==", "!=": "!=", "<": ">", "<=": ">=", ">": "<", ">=": "<="}


# ---------------------------------------------------------------------------
# formula nodes


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Compare:
    var: str
    op: str
    value: int

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class LocationAtom:
    process: str
    location: str


@dataclass(frozen=True)
class DeadlockAtom:
    pass


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", _flatten(And, self.operands))


@dataclass(frozen=True)
class Or:
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", _flatten(Or, self.operands))


Formula = Union[BoolConst, Compare, LocationAtom, DeadlockAtom, Not, And, Or]

TRUE = BoolConst(True)
FALSE = BoolConst(False)
DEADLOCK = DeadlockAtom()


def _flatten(kind, operands):
    flat = []
    for op in operands:
        if isinstance(op, kind):
            flat.extend(op.operands)
        else:
            flat.append(op)
    if len(flat) < 2:
        raise ValueError(f"{kind.__name__} needs at least two operands")
    return tuple(flat)


def conj(*operands):
    """Conjunction that tolerates zero or one operand."""
    if not operands:
        return TRUE
    if len(operands) == 1:
        return operands[0]
    return And(tuple(operands))


def disj(*operands):
    if not operands:
        return FALSE
    if len(operands) == 1:
        return operands[0]
    return Or(tuple(operands))


def is_true(formula) -> bool:
    return formula == TRUE


def variables_of(formula) -> set:
    """Names of all variables a formula or update reads."""
    if isinstance(formula, Compare):
        return {formula.var}
    if isinstance(formula, Not):
        return variables_of(formula.operand)
    if isinstance(formula, (And, Or)):
        out = set()
        for op in formula.operands:
            out |= variables_of(op)
        return out
    return set()


# ---------------------------------------------------------------------------
# updates


@dataclass(frozen=True)
class LinearExpr:
    """``sum(coef * var) + const``."""

    terms: tuple = ()
    const: int = 0

    def evaluate(self, valuation) -> int:
        return sum(c * valuation[v] for c, v in self.terms) + self.const

    @property
    def variables(self):
        return {v for _, v in self.terms}


@dataclass(frozen=True)
class Assign:
    var: str
    expr: LinearExpr


def assign(var, *terms, const=0):
    """Shorthand: ``assign("counter", (1, "counter"), const=1)``."""
    return Assign(var, LinearExpr(tuple(terms), const))


@dataclass(frozen=True)
class Select:
    """Nondeterministic binding ``var : [lo, hi]``."""

    var: str
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"select range [{self.lo}, {self.hi}] is empty")

    def values(self):
        return range(self.lo, self.hi + 1)


# ---------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2, Not: 3}


def _prec(node):
    return _PREC.get(type(node), 4)


def format_formula(node) -> str:
    if isinstance(node, BoolConst):
        return "true" if node.value else "false"
    if isinstance(node, Compare):
        return f"{node.var} {node.op} {node.value}"
    if isinstance(node, LocationAtom):
        return f"{node.process}.{node.location}"
    if isinstance(node, DeadlockAtom):
        return "deadlock"
    if isinstance(node, Not):
        inner = format_formula(node.operand)
        if _prec(node.operand) < _prec(node):
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(node, (And, Or)):
        word = " and " if isinstance(node, And) else " or "
        parts = []
        for op in node.operands:
            text = format_formula(op)
            # same-kind children are flattened, so <= only catches lower precedence
            if _prec(op) <= _prec(node):
                text = f"({text})"
            parts.append(text)
        return word.join(parts)
    raise TypeError(f"not a formula node: {node!r}")


def format_linear(expr: LinearExpr) -> str:
    out = ""
    for coef, var in expr.terms:
        mag = abs(coef)
        body = var if mag == 1 else f"{mag}*{var}"
        if not out:
            out = body if coef >= 0 else f"-{body}"
        else:
            out += f" + {body}" if coef >= 0 else f" - {body}"
    if not out:
        return str(expr.const)
    if expr.const > 0:
        out += f" + {expr.const}"
    elif expr.const < 0:
        out += f" - {-expr.const}"
    return out


def format_update(update) -> str:
    return ", ".join(f"{a.var} := {format_linear(a.expr)}" for a in update)


def format_select(select: Select) -> str:
    return f"{select.var} : [{select.lo}, {select.hi}]"


# ---------------------------------------------------------------------------
# lexing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<quant>[EA](?:<>|\[\]))
  | (?P<leadsto>-->)
  | (?P<cmp>==|!=|<=|>=|<|>)
  | (?P<assign>:=)
  | (?P<andop>&&)
  | (?P<orop>\|\|)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[().,:\[\]+\-*!=?])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "punct":
                kind = value
            elif kind == "andop":
                kind = "and"
            elif kind == "orop":
                kind = "or"
            elif kind == "ident" and value.lower() in ("and", "or", "not", "deadlock", "true", "false"):
                kind = value.lower()
            tokens.append(Token(kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# parsing


class Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.allow_locations = True
        self.allow_deadlock = True

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind, what=None) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {what or repr(kind)}")
        return self.advance()

    def fail(self, message):
        t = self.tok
        if t.kind == "eof":
            message = f"{message}, found end of input"
        elif t.kind == "leadsto":
            message = "unsupported operator '-->' (leads-to is not part of the query language)"
        elif t.kind == "=":
            message = "unknown operator '=' (use '==' for comparison)"
        else:
            message = f"{message}, found {t.text!r}"
        raise QuerySyntaxError(message, self.text, t.pos)

    def expect_end(self):
        if self.tok.kind != "eof":
            self.fail("expected end of input")

    # formula -------------------------------------------------------------

    def formula(self):
        parts = [self.conjunction()]
        while self.tok.kind == "or":
            self.advance()
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.tok.kind == "and":
            self.advance()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        if self.tok.kind in ("not", "!"):
            self.advance()
            return Not(self.unary())
        return self.atom()

    def signed_int(self) -> int:
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        return sign * int(self.expect("int", "integer").text)

    def atom(self):
        kind = self.tok.kind
        if kind == "(":
            self.advance()
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        if kind in ("true", "false"):
            self.advance()
            return BoolConst(kind == "true")
        if kind == "deadlock":
            if not self.allow_deadlock:
                self.fail("'deadlock' is not allowed here")
            self.advance()
            return DEADLOCK
        if kind in ("int", "-"):
            value = self.signed_int()
            op = self.expect("cmp", "comparison operator").text
            var = self.expect("ident", "variable name").text
            return Compare(var, _FLIPPED[op], value)
        if kind == "ident":
            name = self.advance().text
            if self.tok.kind == ".":
                if not self.allow_locations:
                    self.fail("location references are not allowed here")
                self.advance()
                loc = self.tok
                if loc.kind not in ("ident", "deadlock", "true", "false", "and", "or", "not"):
                    self.fail("expected location name")
                self.advance()
                return LocationAtom(name, loc.text)
            if self.tok.kind == "cmp":
                op = self.advance().text
                return Compare(name, op, self.signed_int())
            self.fail(f"expected '.' or comparison after {name!r}")
        self.fail("expected an atom")

    # updates -------------------------------------------------------------

    def update(self):
        out = [self.assignment()]
        while self.tok.kind == ",":
            self.advance()
            out.append(self.assignment())
        return tuple(out)

    def assignment(self):
        var = self.expect("ident", "variable name").text
        if self.tok.kind not in ("assign", "="):
            self.fail("expected ':='")
        self.advance()
        return Assign(var, self.linear())

    def linear(self):
        terms = []
        const = 0
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        while True:
            if self.tok.kind == "int":
                value = int(self.advance().text)
                if self.tok.kind == "*":
                    self.advance()
                    terms.append((sign * value, self.expect("ident", "variable name").text))
                else:
                    const += sign * value
            elif self.tok.kind == "ident":
                terms.append((sign, self.advance().text))
            else:
                self.fail("expected integer or variable")
            if self.tok.kind == "+":
                sign = 1
            elif self.tok.kind == "-":
                sign = -1
            else:
                break
            self.advance()
        return LinearExpr(tuple(terms), const)


def parse_formula(text: str, *, locations=True, deadlock=True):
    p = Parser(text)
    p.allow_locations = locations
    p.allow_deadlock = deadlock
    node = p.formula()
    p.expect_end()
    return node


def parse_guard(text: str):
    """Parse a guard; the empty string means ``true``."""
    if not text.strip():
        return TRUE
    return parse_formula(text, locations=False, deadlock=False)


def parse_update(text: str) -> tuple:
    if not text.strip():
        return ()
    p = Parser(text)
    out = p.update()
    p.expect_end()
    return out


def parse_select(text: str) -> Select:
    p = Parser(text)
    var = p.expect("ident", "variable name").text
    p.expect(":", "':'")
    p.expect("[", "'['")
    lo = p.signed_int()
    p.expect(",", "','")
    hi = p.signed_int()
    p.expect("]", "']'")
    p.expect_end()
    if lo > hi:
        raise QuerySyntaxError(f"empty select range [{lo}, {hi}]", text, 0)
    return Select(var, lo, hi)
