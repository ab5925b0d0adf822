"""Regular expression trees over single-character symbols."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError


@dataclass(frozen=True)
class EmptyLanguage:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Symbol:
    symbol: str


@dataclass(frozen=True)
class Concat:
    parts: tuple


@dataclass(frozen=True)
class Union:
    parts: tuple


@dataclass(frozen=True)
class Star:
    inner: object


def concat(*parts):
    if not parts:
        return Epsilon()
    if len(parts) == 1:
        return parts[0]
    return Concat(tuple(parts))


def union(*parts):
    if not parts:
        return EmptyLanguage()
    if len(parts) == 1:
        return parts[0]
    return Union(tuple(parts))


def word(w: str):
    return concat(*(Symbol(c) for c in w))


def format_regex(node) -> str:
    if isinstance(node, EmptyLanguage):
        return "∅"
    if isinstance(node, Epsilon):
        return "ε"
    if isinstance(node, Symbol):
        return node.symbol
    if isinstance(node, Union):
        return "+".join(format_regex(p) for p in node.parts)
    if isinstance(node, Concat):
        return "".join(
            f"({format_regex(p)})" if isinstance(p, Union) else format_regex(p) for p in node.parts
        )
    if isinstance(node, Star):
        inner = format_regex(node.inner)
        if isinstance(node.inner, (Union, Concat)):
            inner = f"({inner})"
        return inner + "*"
    raise TypeError(f"not a regex node: {node!r}")


def parse_regex(text: str):
    """Parse the textbook notation: ``+`` for choice, juxtaposition, ``*``, parentheses.

    Every other non-space character is a one-letter symbol; ``ε`` and ``∅``
    denote the empty word and the empty language.
    """
    chars = [(i, c) for i, c in enumerate(text) if not c.isspace()]
    pos = 0

    def peek():
        return chars[pos][1] if pos < len(chars) else None

    def offset():
        return chars[pos][0] if pos < len(chars) else len(text)

    def alternation():
        nonlocal pos
        parts = [sequence()]
        while peek() == "+":
            pos += 1
            parts.append(sequence())
        return union(*parts)

    def sequence():
        parts = []
        while peek() is not None and peek() not in "+)":
            parts.append(postfix())
        if not parts:
            raise QuerySyntaxError("empty regex operand", text, offset())
        return concat(*parts)

    def postfix():
        nonlocal pos
        node = primary()
        while peek() == "*":
            pos += 1
            node = Star(node)
        return node

    def primary():
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            node = alternation()
            if peek() != ")":
                raise QuerySyntaxError("expected ')'", text, offset())
            pos += 1
            return node
        if c == "*":
            raise QuerySyntaxError("dangling '*'", text, offset())
        pos += 1
        if c == "ε":
            return Epsilon()
        if c == "∅":
            return EmptyLanguage()
        return Symbol(c)

    if not chars:
        return Epsilon()
    node = alternation()
    if pos != len(chars):
        raise QuerySyntaxError(f"unexpected {peek()!r}", text, offset())
    return node
