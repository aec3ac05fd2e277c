"""Scalar expressions over x1..xn for defining sampled test fields.

Grammar, loosest binding first::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | CONST | VAR | FUNC "(" expr ")" | "(" expr ")"

so ``-x1^2`` is ``-(x1^2)``, ``2^-1`` is ``2^(-1)`` and ``^`` nests to the
right.  Evaluation is vectorised over numpy arrays of coordinates.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)
_VAR_RE = re.compile(r"^x([1-9]\d*)$")

# binding strength used by the printer
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC = 3
_POW_PREC = 4
_ATOM_PREC = 5


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class EvaluationError(ArithmeticError):
    """Raised for division by zero or sqrt of a negative number.

    ``index`` is the flat position of the first offending element.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class Expr:
    prec = _ATOM_PREC

    def evaluate(self, coords: Sequence = ()) -> np.ndarray:
        """Evaluate with ``coords[l - 1]`` bound to ``xl``."""
        coords = [np.asarray(c, dtype=float) for c in coords]
        shape = np.broadcast_shapes(*(c.shape for c in coords)) if coords else ()
        return np.broadcast_to(self._eval(coords), shape).astype(float)

    def max_variable(self) -> int:
        return 0

    def _eval(self, coords):
        raise NotImplementedError


def _format_number(v: float) -> str:
    s = repr(v)
    return s[:-2] if s.endswith(".0") else s


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def _eval(self, coords):
        return np.float64(self.value)

    def __str__(self):
        return _format_number(self.value)


@dataclass(frozen=True)
class Const(Expr):
    name: str

    def _eval(self, coords):
        return np.float64(CONSTANTS[self.name])

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Var(Expr):
    index: int

    def _eval(self, coords):
        if self.index > len(coords):
            raise EvaluationError(f"x{self.index} is not bound (only {len(coords)} coordinates)")
        return coords[self.index - 1]

    def max_variable(self):
        return self.index

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    prec = _NEG_PREC

    def _eval(self, coords):
        return -self.operand._eval(coords)

    def max_variable(self):
        return self.operand.max_variable()

    def __str__(self):
        return "-" + _wrap(self.operand, self.operand.prec < _NEG_PREC)


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def _eval(self, coords):
        x = self.arg._eval(coords)
        if self.func == "sqrt" and np.any(x < 0):
            raise EvaluationError("sqrt of a negative number", _first(x < 0))
        return FUNCTIONS[self.func](x)

    def max_variable(self):
        return self.arg.max_variable()

    def __str__(self):
        return f"{self.func}({self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    @property
    def prec(self):
        return _POW_PREC if self.op == "^" else _PREC[self.op]

    def _eval(self, coords):
        a = self.left._eval(coords)
        b = self.right._eval(coords)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            zero = np.asarray(b) == 0
            if np.any(zero):
                raise EvaluationError("division by zero", _first(np.broadcast_to(zero, np.broadcast(a, b).shape)))
            return a / b
        with np.errstate(invalid="ignore", divide="ignore"):
            out = np.power(a, b)
        bad = np.isnan(out) & ~(np.isnan(a) | np.isnan(b))
        if np.any(bad):
            raise EvaluationError("power of a negative base to a fractional exponent", _first(bad))
        return out

    def max_variable(self):
        return max(self.left.max_variable(), self.right.max_variable())

    def __str__(self):
        if self.op == "^":
            left = _wrap(self.left, self.left.prec <= _POW_PREC)
            right = _wrap(self.right, self.right.prec < _NEG_PREC)
            return f"{left}^{right}"
        p = self.prec
        left = _wrap(self.left, self.left.prec < p)
        right = _wrap(self.right, self.right.prec <= p)
        return f"{left}{self.op}{right}"


def _wrap(e: Expr, paren: bool) -> str:
    return f"({e})" if paren else str(e)


def _first(mask) -> int:
    return int(np.flatnonzero(np.ravel(mask))[0])


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        if m.lastgroup != "ws":
            tokens.append(_Token(m.lastgroup, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str):
        if self.tok.text != text or self.tok.kind == "end":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.tok.offset)
        self.take()

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take().text
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.take()
            return Num(float(t.text))
        if t.kind == "ident":
            self.take()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in CONSTANTS:
                return Const(t.text)
            m = _VAR_RE.match(t.text)
            if m:
                return Var(int(m.group(1)))
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.offset)
        if t.kind == "op" and t.text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"expected an operand, found {found}", t.offset)


def parse_scalar_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises:
        ExprSyntaxError: with the byte ``offset`` of the offending token.
        UnknownIdentifier: for names that are not variables, constants or
            functions.
    """
    return _Parser(text).parse()
