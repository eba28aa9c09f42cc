"""Operator expression parser.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' nat)?
    atom   := rational | symbol | '(' expr ')'

``*`` is the noncommutative product and associates to the left.  Unary
minus binds looser than ``^`` so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from weylalg.errors import WeylError
from weylalg.scalars import ParamPoly, q
from weylalg.weyl import WeylOp
from weylalg.bivariate import BiPoly


class ParseError(WeylError, ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Sym, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)

OPERATOR_SYMBOLS = frozenset({"x", "D", "a"})
RELATION_SYMBOLS = frozenset({"X", "Y", "a"})


class _Parser:
    def __init__(self, text: str, symbols: frozenset):
        self.text = text
        self.symbols = symbols
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m.group(0).strip() == "":
                break
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("num", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("name", m.group(2), start))
            else:
                self.tokens.append(("op", m.group(3), start))
            pos = m.end()
        self.tokens.append(("end", "", len(text.rstrip())))
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok[2])

    def expect(self, op: str):
        tok = self.take()
        if tok != ("op", op, tok[2]):
            self.fail(f"expected '{op}'", tok)

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.take()
            if tok[0] == "op" and tok[1] == "-":
                self.fail("negative exponent", tok)
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a non-negative integer literal", tok)
            node = Pow(node, int(tok[1]))
        return node

    def atom(self) -> Expr:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return Num(Fraction(val))
        if kind == "name":
            if val not in self.symbols:
                self.fail(f"unknown symbol {val!r}", tok)
            return Sym(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)


def parse(text: str, symbols: frozenset = OPERATOR_SYMBOLS) -> Expr:
    return _Parser(text, symbols).parse()


def evaluate(node: Expr, env: Mapping[str, object], lift: Callable):
    """Fold the tree using the values in ``env``; ``lift`` turns literals into values."""
    if isinstance(node, Num):
        return lift(q(node.value))
    if isinstance(node, Sym):
        return env[node.name]
    if isinstance(node, Neg):
        return -evaluate(node.operand, env, lift)
    if isinstance(node, Pow):
        return evaluate(node.base, env, lift) ** node.exponent
    left = evaluate(node.left, env, lift)
    right = evaluate(node.right, env, lift)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return left * right


_OP_ENV = {"x": WeylOp.x(), "D": WeylOp.d(), "a": WeylOp.alpha()}


def parse_operator(text: str) -> WeylOp:
    return evaluate(parse(text, OPERATOR_SYMBOLS), _OP_ENV, WeylOp.const)


def parse_relation(text: str) -> BiPoly:
    env = {"X": BiPoly.X(), "Y": BiPoly.Y(), "a": BiPoly.const(ParamPoly.alpha())}
    return evaluate(parse(text, RELATION_SYMBOLS), env, BiPoly.const)


def render(P: WeylOp) -> str:
    return str(P)
