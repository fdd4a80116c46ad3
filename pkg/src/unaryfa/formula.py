"""Quantifier-free formulas over named unary languages.

Grammar, loosest binding first::

    formula := disj
    disj    := conj ("or" conj)*
    conj    := neg ("and" neg)*
    neg     := "not" neg | cmp
    cmp     := lang (REL lang)?            REL: = == != ≠ <= ⊆
    lang    := meet (("|" | "∪" | "^" | "△") meet)*
    meet    := cat (("&" | "∩") cat)*
    cat     := atom (("." | "·") atom)*
    atom    := NAME | ALL | EMPTY | "(" formula ")"
             | complement(formula) | star(formula)
             | universal(formula) | empty(formula)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .chrobak import determinize, nfa_to_chrobak, normalize
from .core import ChrobakNF, ambiguity_chrobak
from .errors import ConcatDisallowed, FormatError

_TOKEN = re.compile(r"\s*(?:(==|!=|<=|[=≠⊆()|∪^△&∩.·])|([A-Za-z_][A-Za-z0-9_]*))")
_FUNCS = {"complement", "star", "universal", "empty"}
_RELS = {"=": "eq", "==": "eq", "!=": "ne", "≠": "ne", "<=": "sub", "⊆": "sub"}
_UNION = {"|": "union", "∪": "union", "^": "symdiff", "△": "symdiff"}
_MEET = {"&", "∩"}
_CAT = {".", "·"}


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple = ()
    name: str = ""


def tokenize(text: str) -> list:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormatError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise FormatError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def disj(self):
        node = self.conj()
        while self.peek() == "or":
            self.take()
            node = Node("or", (node, self.conj()))
        return node

    def conj(self):
        node = self.neg()
        while self.peek() == "and":
            self.take()
            node = Node("and", (node, self.neg()))
        return node

    def neg(self):
        if self.peek() == "not":
            self.take()
            return Node("not", (self.neg(),))
        return self.cmp()

    def cmp(self):
        left = self.lang()
        if self.peek() in _RELS:
            rel = _RELS[self.take()]
            return Node(rel, (left, self.lang()))
        return left

    def lang(self):
        node = self.meet()
        while self.peek() in _UNION:
            node = Node(_UNION[self.take()], (node, self.meet()))
        return node

    def meet(self):
        node = self.cat()
        while self.peek() in _MEET:
            self.take()
            node = Node("intersect", (node, self.cat()))
        return node

    def cat(self):
        node = self.atom()
        while self.peek() in _CAT:
            self.take()
            node = Node("concat", (node, self.atom()))
        return node

    def atom(self):
        tok = self.take()
        if tok == "(":
            node = self.disj()
            self.take(")")
            return node
        if tok in _FUNCS:
            self.take("(")
            arg = self.disj()
            self.take(")")
            return Node(tok, (arg,))
        if tok in ("ALL", "EMPTY"):
            return Node(tok.lower())
        if tok[0].isalpha() or tok[0] == "_":
            return Node("name", name=tok)
        raise FormatError(f"unexpected token {tok!r}")


def parse(text: str) -> Node:
    parser = _Parser(tokenize(text))
    node = parser.disj()
    if parser.peek() is not None:
        raise FormatError(f"trailing input at {parser.peek()!r}")
    return node


def _unambiguous(c: ChrobakNF) -> bool:
    return ambiguity_chrobak(c).unambiguous


def _ufa(c: ChrobakNF) -> ChrobakNF:
    """An unambiguous automaton for the same language (DFA if needed)."""
    return c if _unambiguous(c) else determinize(c)


def _subset(a: ChrobakNF, b: ChrobakNF) -> bool:
    from .decision import nfa_subset, ufa_inclusion

    if _unambiguous(b):
        return ufa_inclusion(a, b).holds
    return nfa_subset(a, b).holds


def _language(value, what):
    if not isinstance(value, ChrobakNF):
        raise FormatError(f"{what} needs a language, got a truth value")
    return value


def evaluate(node: Node, bindings: dict, allow_concat: bool = False):
    from .decision import nfa_universal, ufa_universal
    from .regops import (
        complement_ufa,
        concat_chrobak,
        intersect_chrobak,
        star_chrobak,
        symdiff_ufa,
        union_disjoint_chrobak,
        union_ufa,
    )

    def ev(n):
        return evaluate(n, bindings, allow_concat)

    op = node.op
    if op == "name":
        if node.name not in bindings:
            raise FormatError(f"unbound name {node.name!r}")
        value = bindings[node.name]
        return value if isinstance(value, ChrobakNF) else nfa_to_chrobak(value)
    if op == "all":
        return ChrobakNF.all_words()
    if op == "empty" and not node.args:
        return ChrobakNF.empty()
    if op in ("and", "or", "not"):
        vals = [ev(a) for a in node.args]
        if not all(isinstance(v, bool) for v in vals):
            raise FormatError(f"'{op}' needs truth values")
        if op == "not":
            return not vals[0]
        return all(vals) if op == "and" else any(vals)
    args = [_language(ev(a), op) for a in node.args]
    if op == "complement":
        return complement_ufa(_ufa(args[0]))
    if op == "star":
        return star_chrobak(args[0])
    if op == "universal":
        c = args[0]
        return ufa_universal(c) if _unambiguous(c) else nfa_universal(c).holds
    if op == "empty":
        c = normalize(args[0])
        return not c.stem.any() and not c.cycles
    a, b = args
    if op == "union":
        if _unambiguous(a) and _unambiguous(b):
            return union_ufa(a, b)
        return union_disjoint_chrobak(a, b)
    if op == "symdiff":
        return symdiff_ufa(_ufa(a), _ufa(b))
    if op == "intersect":
        return intersect_chrobak(a, b)
    if op == "concat":
        if not allow_concat:
            raise ConcatDisallowed("concatenation needs the explicit allow flag")
        return concat_chrobak(a, b)
    if op == "sub":
        return _subset(a, b)
    if op == "eq":
        return _subset(a, b) and _subset(b, a)
    if op == "ne":
        return not (_subset(a, b) and _subset(b, a))
    raise FormatError(f"unknown operator {op!r}")
