"""Tiny arithmetic language for exact surd constants in config files.

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor

The Unicode minus sign is accepted wherever '-' is.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import LeastActionError


class ConstExprError(LeastActionError, ValueError):
    """Syntax or evaluation error; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} at offset {self.offset}")


@dataclass(frozen=True)
class Num:
    value: float
    text: str

    def eval(self) -> float:
        return self.value

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Neg:
    arg: "Node"

    def eval(self) -> float:
        return -self.arg.eval()

    def __str__(self) -> str:
        return f"-{_wrap(self.arg, 3)}"


@dataclass(frozen=True)
class Sqrt:
    arg: "Node"

    def eval(self) -> float:
        v = self.arg.eval()
        if v < 0:
            raise ValueError(f"sqrt of negative value {v}")
        return math.sqrt(v)

    def __str__(self) -> str:
        return f"sqrt({self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def eval(self) -> float:
        a, b = self.left.eval(), self.right.eval()
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0:
            raise ZeroDivisionError("division by zero in constant expression")
        return a / b

    def __str__(self) -> str:
        p = _prec(self)
        # left-associative: the right operand needs parens at equal precedence
        return f"{_wrap(self.left, p)} {self.op} {_wrap(self.right, p + 1)}"


Node = Num | Neg | Sqrt | BinOp


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    return 3


def _wrap(node, p) -> str:
    return f"({node})" if _prec(node) < p else str(node)


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/()−]))")


def _tokenize(text: str):
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = len(text) - len(text[pos:].lstrip())
            if rest == len(text):
                break
            raise ConstExprError(f"unknown token {text[rest]!r}", text, rest)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if val == "−":
            val = "-"
        toks.append((kind, val, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ConstExprError(msg, self.text, tok[2])

    def expect(self, val):
        tok = self.peek()
        if tok[1] != val or tok[0] != "op":
            self.fail(f"expected {val!r}" if tok[0] != "end" else f"expected {val!r}, got end of input")
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, val, _ = tok = self.peek()
        if kind == "num":
            self.take()
            return Num(float(val), val)
        if kind == "name":
            if val != "sqrt":
                self.fail(f"unknown identifier {val!r}")
            self.take()
            self.expect("(")
            node = self.expr()
            self.expect(")")
            return Sqrt(node)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            self.fail("unbalanced ')'" if tok[1] == ")" else f"unexpected {tok[1]!r}")
        return node


def parse_const_expr(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(text_or_value) -> float:
    """Numbers pass through; strings are parsed and evaluated."""
    if isinstance(text_or_value, bool):
        raise TypeError("boolean is not a numeric constant")
    if isinstance(text_or_value, (int, float)):
        return float(text_or_value)
    if not isinstance(text_or_value, str):
        raise TypeError(f"expected number or expression string, got {type(text_or_value).__name__}")
    node = parse_const_expr(text_or_value)
    try:
        return node.eval()
    except (ValueError, ZeroDivisionError) as exc:
        raise ConstExprError(str(exc), text_or_value, 0) from exc
