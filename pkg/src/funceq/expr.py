"""Minimal expression language for coefficient functions of one variable.

Grammar (standard precedence, lowest to highest)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | IDENT '(' expr ')' | IDENT | '(' expr ')'

The single free variable is ``x``; any other bare identifier is a named
parameter that must be bound at evaluation time.  Recognized functions are
``sin``, ``cos``, ``exp``, ``sqrt`` and ``abs``.  There is no implicit
multiplication: ``2x`` is a syntax error.

Parsed trees are immutable and safe to evaluate concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}


class ParseError(ValueError):
    """Malformed source text; ``position`` is a 0-based offset into it."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownFunctionError(ParseError):
    """An identifier that is not a known function was applied as one."""


class EvalError(ValueError):
    """Evaluation failed; ``subexpr`` is the offending subexpression source."""

    def __init__(self, message: str, subexpr: str):
        super().__init__(f"{message} in '{subexpr}'")
        self.subexpr = subexpr


class UnboundParameterError(EvalError):
    pass


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Param, Neg, BinOp, Call]


# --- tokenizer ---------------------------------------------------------------

_OPS = set("+-*/^()")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, position) triples; kind is num|ident|op|end."""
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            start = i
            while i < n and (source[i].isdigit() or source[i] == "."):
                i += 1
            if i < n and source[i] in "eE":
                j = i + 1
                if j < n and source[j] in "+-":
                    j += 1
                if j < n and source[j].isdigit():
                    i = j
                    while i < n and source[i].isdigit():
                        i += 1
            text = source[start:i]
            try:
                float(text)
            except ValueError:
                raise ParseError(f"bad number literal '{text}'", start) from None
            tokens.append(("num", text, start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            tokens.append(("ident", source[start:i], start))
            continue
        raise ParseError(f"unexpected character '{ch}'", i)
    tokens.append(("end", "", n))
    return tokens


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, position = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        what = f"'{text}'" if kind != "end" else "end of input"
        raise ParseError(f"expected '{op}', found {what}", position)

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, position = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input '{text}'", position)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, text, position = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nk, nt, _ = self.peek()
            if nk == "op" and nt == "(":
                if text not in FUNCTIONS:
                    raise UnknownFunctionError(f"unknown function '{text}'", position)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text == "x":
                return Var()
            return Param(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        what = f"'{text}'" if kind != "end" else "end of input"
        raise ParseError(f"expected a value, found {what}", position)


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ParseError` (with position) on malformed input and
    :class:`UnknownFunctionError` when an unrecognized identifier is applied
    as a function.
    """
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


# --- evaluation --------------------------------------------------------------


def _pow_int(base: float, n: int) -> float:
    # repeated multiplication keeps x^2 == x*x bit-for-bit
    out = 1.0
    b = base
    k = n
    while k:
        if k & 1:
            out *= b
        b *= b
        k >>= 1
    return out


def evaluate(e: Expr, params: Mapping[str, float], x: float) -> float:
    """Evaluate tree ``e`` at point ``x`` with the given parameter bindings.

    Division by zero and sqrt of a negative are hard errors, not NaNs:
    coefficient functions must be total on [0, 1], so a silent NaN would
    mask a misconfigured problem.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Param):
        try:
            return float(params[e.name])
        except KeyError:
            raise UnboundParameterError(
                f"parameter '{e.name}' is not bound", to_source(e)
            ) from None
    if isinstance(e, Neg):
        return -evaluate(e.operand, params, x)
    if isinstance(e, Call):
        arg = evaluate(e.arg, params, x)
        if e.func == "sqrt" and arg < 0.0:
            raise EvalError(f"sqrt of negative value {arg!r}", to_source(e))
        return FUNCTIONS[e.func](arg)
    if isinstance(e, BinOp):
        left = evaluate(e.left, params, x)
        right = evaluate(e.right, params, x)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            if right == 0.0:
                raise EvalError("division by zero", to_source(e))
            return left / right
        # '^': repeated multiplication for integer exponents, exp·log otherwise
        if float(right).is_integer():
            n = int(right)
            if n >= 0:
                return _pow_int(left, n)
            denom = _pow_int(left, -n)
            if denom == 0.0:
                raise EvalError("zero raised to a negative power", to_source(e))
            return 1.0 / denom
        if left <= 0.0:
            raise EvalError(
                f"non-integer power of non-positive base {left!r}", to_source(e)
            )
        return math.exp(right * math.log(left))
    raise TypeError(f"not an expression node: {e!r}")


def parameters(e: Expr) -> set[str]:
    """Names of all parameters appearing in the tree."""
    if isinstance(e, Param):
        return {e.name}
    if isinstance(e, Neg):
        return parameters(e.operand)
    if isinstance(e, Call):
        return parameters(e.arg)
    if isinstance(e, BinOp):
        return parameters(e.left) | parameters(e.right)
    return set()


# --- pretty printer ----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_ATOM_PREC = 5
_NEG_PREC = 4


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _wrap(e: Expr, min_prec: int) -> str:
    text = to_source(e)
    return f"({text})" if _prec(e) < min_prec else text


def to_source(e: Expr) -> str:
    """Render the tree back to parseable source (diagnostics, round-trips)."""
    if isinstance(e, Num):
        v = e.value
        return repr(int(v)) if v.is_integer() and abs(v) < 1e16 else repr(v)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Param):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _NEG_PREC)
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        if e.op == "^":
            # right-associative; the base position only admits atoms
            return f"{_wrap(e.left, _ATOM_PREC)}^{_wrap(e.right, p)}"
        spaced = f" {e.op} " if p == 1 else e.op
        return f"{_wrap(e.left, p)}{spaced}{_wrap(e.right, p + 1)}"
    raise TypeError(f"not an expression node: {e!r}")
