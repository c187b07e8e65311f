"""Scalar literal grammar: integers, ``q``, ``+ - * /``, ``^`` with integer
exponents (negative allowed) and parentheses, e.g. ``"(q^2-1)/q"``."""

from __future__ import annotations

import re

from .scalar import Scalar, ScalarZeroDivision

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.column = pos + 1
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


def _tokens(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("q", None, start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            out.append((ch, None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(self.text[tok[2]])
            raise ParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def expr(self):
        val = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if not rhs:
                    raise ParseError("division by zero", self.text, pos)
                val = val / rhs
        return val

    def unary(self):
        if self.peek()[0] in "+-":
            op = self.take()[0]
            val = self.unary()
            return -val if op == "-" else val
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] in "+-":
                sign = -1 if self.take()[0] == "-" else 1
            tok = self.peek()
            if tok[0] != "int":
                raise ParseError("exponent must be an integer", self.text, tok[2])
            self.take()
            try:
                base = base ** (sign * tok[1])
            except ScalarZeroDivision:
                raise ParseError("zero to a negative power", self.text, tok[2]) from None
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return Scalar(val)
        if kind == "q":
            self.take()
            return Scalar.q()
        if kind == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        what = "end of input" if kind == "end" else repr(self.text[pos])
        raise ParseError(f"unexpected {what}", self.text, pos)


def parse_scalar(text: str) -> Scalar:
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise ParseError("empty literal", text, 0)
    val = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {text[tok[2]]!r}", text, tok[2])
    return val
