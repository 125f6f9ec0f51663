"""Recursive-descent parser for coefficient expressions.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'i' | 't' | 'z'k | 'zb'k | '(' expr ')'

Division is only allowed by nonzero constants.  Parsing produces a small
AST so evaluation can detect terms lost to t-truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .coeff_ring import GaussRational, PolySeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ExprError(ValueError):
    """Malformed expression; ``pos`` is a 0-based column in the source."""

    def __init__(self, message: str, pos: int, token: str):
        super().__init__(f"{message} at column {pos + 1} (token {token!r})")
        self.message = message
        self.pos = pos
        self.token = token


@dataclass(frozen=True)
class Tok:
    kind: str  # 'int', 'name', 'op', 'end'
    text: str
    pos: int


def tokenize(src: str) -> List[Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(Tok("int", m.group(1), start))
        elif m.group(2) is not None:
            toks.append(Tok("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprError("unexpected character", start, ch)
            toks.append(Tok("op", ch, start))
        pos = m.end()
    toks.append(Tok("end", "", len(src)))
    return toks


# AST nodes are plain tuples: ('num', int) ('imag',) ('var', kind, axis)
# ('neg', x) ('add', x, y) ('sub', x, y) ('mul', x, y) ('div', x, y, pos, tok)
# ('pow', x, e)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Tok:
        return self.toks[self.i]

    def take(self) -> Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok: Optional[Tok] = None):
        tok = tok or self.peek()
        raise ExprError(message, tok.pos, tok.text or "<end>")

    def parse(self):
        if self.peek().kind == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek().kind != "end":
            self.fail("unexpected token")
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                node = ("mul", node, rhs)
            else:
                node = ("div", node, rhs, op.pos, op.text)
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if tok.text == "+" else ("neg", inner)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            tok = self.peek()
            if tok.kind != "int":
                self.fail("exponent must be a non-negative integer literal")
            self.take()
            return ("pow", base, int(tok.text))
        return base

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return ("num", int(tok.text))
        if tok.kind == "name":
            return self.variable(tok)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            close = self.take()
            if close.text != ")":
                self.fail("expected ')'", close)
            return node
        self.fail("expected a number, variable or '('", tok)

    def variable(self, tok: Tok):
        name = tok.text
        if name == "i":
            return ("imag",)
        if name == "t":
            return ("var", "t", 0, tok.pos, name)
        if name in ("tb", "tbar"):
            self.fail("antiholomorphic parameter dependence is not supported", tok)
        m = re.fullmatch(r"(zb|z)([1-9][0-9]*)", name)
        if not m:
            self.fail("unknown identifier", tok)
        return ("var", m.group(1), int(m.group(2)), tok.pos, name)


def parse_ast(src: str):
    return _Parser(src).parse()


def t_degree_bound(node) -> int:
    """Upper bound on the t-degree of the untruncated value of ``node``."""
    kind = node[0]
    if kind in ("num", "imag"):
        return 0
    if kind == "var":
        return 1 if node[1] == "t" else 0
    if kind == "neg":
        return t_degree_bound(node[1])
    if kind in ("add", "sub"):
        return max(t_degree_bound(node[1]), t_degree_bound(node[2]))
    if kind == "mul":
        return t_degree_bound(node[1]) + t_degree_bound(node[2])
    if kind == "div":
        return t_degree_bound(node[1])
    if kind == "pow":
        return t_degree_bound(node[1]) * node[2]
    raise AssertionError(kind)


def evaluate(node, n: int, N: int) -> PolySeries:
    kind = node[0]
    if kind == "num":
        return PolySeries.const(n, N, node[1])
    if kind == "imag":
        return PolySeries.const(n, N, GaussRational(0, 1))
    if kind == "var":
        _, var, axis, pos, name = node
        if var == "t":
            return PolySeries.t(n, N)
        if not 1 <= axis <= n:
            raise ExprError(f"variable axis {axis} out of range 1..{n}", pos, name)
        return PolySeries.z(n, N, axis) if var == "z" else PolySeries.zb(n, N, axis)
    if kind == "neg":
        return -evaluate(node[1], n, N)
    if kind == "add":
        return evaluate(node[1], n, N) + evaluate(node[2], n, N)
    if kind == "sub":
        return evaluate(node[1], n, N) - evaluate(node[2], n, N)
    if kind == "mul":
        return evaluate(node[1], n, N) * evaluate(node[2], n, N)
    if kind == "div":
        num = evaluate(node[1], n, N)
        den = evaluate(node[2], n, N)
        if len(den.terms) != 1 or den.constant_term() == 0:
            raise ExprError("division is only allowed by a nonzero constant", node[3], node[4])
        return num.scale(den.constant_term().inverse())
    if kind == "pow":
        return evaluate(node[1], n, N) ** node[2]
    raise AssertionError(kind)


_MAX_EXACT_ORDER = 64


def parse_poly(src: str, n: int, N: int) -> Tuple[PolySeries, bool]:
    """Parse ``src`` into the ring (n, N).

    Returns ``(value, truncated)`` where ``truncated`` reports that some
    nonzero t-power above ``N`` was dropped.
    """
    node = parse_ast(src)
    bound = t_degree_bound(node)
    if bound <= N:
        return evaluate(node, n, N), False
    if bound > _MAX_EXACT_ORDER:
        return evaluate(node, n, N), True
    full = evaluate(node, n, bound)
    return full.retruncate(N), full.t_degree() > N


def poly(src: str, n: int, N: int) -> PolySeries:
    """Convenience parser that ignores truncation."""
    return parse_poly(src, n, N)[0]


def gauss(src: str) -> GaussRational:
    value = poly(src, 0, 0)
    if len(value.terms) > 1:
        raise ValueError(f"{src!r} is not a constant")
    return value.constant_term()


__all__ = ["ExprError", "parse_poly", "poly", "gauss", "parse_ast", "tokenize"]
