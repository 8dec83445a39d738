"""Tokenizer and Pratt parser for the shared expression grammar.

The grammar covers terms such as ``-q^2*(1+q^2)*rho^-1*zb`` and
``c*q^2/(1+q^2)``.  The parser is generic: identifiers and integers are
handed to callbacks, and the arithmetic is delegated to the values they
return, so the same code reads scalars and algebra elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable

__all__ = ["ParseError", "parse_expression"]


class ParseError(ValueError):
    """Malformed expression; ``pos`` is the 0-based offending offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        caret = " " * pos + "^"
        super().__init__(f"{message} at position {pos}\n  {text}\n  {caret}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9']*)|(\S))")


@dataclass
class _Tok:
    kind: str  # 'int', 'name', 'op', 'end'
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append(_Tok("op", ch, m.start(3)))
        i = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, on_name, on_int, power):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.on_name = on_name
        self.on_int = on_int
        self.power = power

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok.pos)

    def expect(self, op):
        tok = self.take()
        if tok.kind != "op" or tok.value != op:
            self.error(f"expected {op!r}", tok)

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        value = self.sum()
        if self.peek().kind != "end":
            self.error("unexpected token")
        return value

    def sum(self):
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.value in "+-":
            self.take()
            negate = tok.value == "-"
        value = self.product()
        if negate:
            value = -value
        while self.peek().kind == "op" and self.peek().value in "+-":
            op = self.take().value
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self):
        value = self.factor()
        while self.peek().kind == "op" and self.peek().value in "*/":
            op = self.take()
            rhs = self.factor()
            if op.value == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except (TypeError, ZeroDivisionError, ValueError) as exc:
                    raise ParseError(f"invalid division ({exc})", self.text, op.pos) from None
        return value

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.value == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            caret = self.take()
            exp = self.exponent()
            try:
                base = self.power(base, exp)
            except (TypeError, ZeroDivisionError, ValueError) as exc:
                raise ParseError(f"invalid power ({exc})", self.text, caret.pos) from None
        return base

    def exponent(self) -> int:
        tok = self.peek()
        sign = 1
        if tok.kind == "op" and tok.value == "(":
            self.take()
            if self.peek().kind == "op" and self.peek().value in "+-":
                sign = -1 if self.take().value == "-" else 1
            num = self.take()
            if num.kind != "int":
                self.error("expected integer exponent", num)
            self.expect(")")
            return sign * int(num.value)
        if tok.kind == "op" and tok.value in "+-":
            self.take()
            sign = -1 if tok.value == "-" else 1
        num = self.take()
        if num.kind != "int":
            self.error("expected integer exponent", num)
        return sign * int(num.value)

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.on_int(int(tok.value))
        if tok.kind == "name":
            try:
                return self.on_name(tok.value)
            except KeyError:
                raise ParseError(f"unknown symbol {tok.value!r}", self.text, tok.pos) from None
        if tok.kind == "op" and tok.value == "(":
            value = self.sum()
            self.expect(")")
            return value
        self.error("unexpected token", tok)


def parse_expression(
    text: str,
    on_name: Callable[[str], Any],
    on_int: Callable[[int], Any],
    power: Callable[[Any, int], Any] = lambda b, e: b**e,
):
    """Parse ``text``; ``on_name`` raises KeyError for unknown identifiers."""
    return _Parser(text, on_name, on_int, power).parse()
