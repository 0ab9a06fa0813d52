"""Closed-form expressions in one variable.

The language covers what the built-in problems and user potentials need:
binary + - * / ^ (with ^ right-associative and binding tighter than unary
minus), the functions exp, log, tanh, cosh, sin, cos, sqrt, numeric
literals, the constant pi, and the variable x.  It is closed under
differentiation: cosh' is expressed through exp, tanh' through tanh.

Trees round-trip through ``str``: printing uses minimal parentheses and
re-parsing yields an equal tree.  ``pi`` is folded to its numeric value at
parse time, as is unary minus applied to a literal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError, ExpressionError

__all__ = ["FunctionExpr", "parse_expression"]

_FUNCTIONS = ("exp", "log", "tanh", "cosh", "sin", "cos", "sqrt")


# ---------------------------------------------------------------------------
# AST nodes


@dataclass(frozen=True)
class _Num:
    value: float


@dataclass(frozen=True)
class _Var:
    pass


@dataclass(frozen=True)
class _Neg:
    arg: object


@dataclass(frozen=True)
class _Bin:
    op: str  # one of + - * / ^
    lhs: object
    rhs: object


@dataclass(frozen=True)
class _Call:
    fn: str
    arg: object


# Folding constructors.  Keeping literal negation and the obvious
# identities folded makes derivatives printable without a simplifier.


def _num(v: float):
    return _Num(float(v))


def _neg(a):
    if isinstance(a, _Num):
        return _Num(-a.value)
    if isinstance(a, _Neg):
        return a.arg
    return _Neg(a)


def _add(a, b):
    if isinstance(a, _Num) and a.value == 0.0:
        return b
    if isinstance(b, _Num) and b.value == 0.0:
        return a
    if isinstance(a, _Num) and isinstance(b, _Num):
        return _num(a.value + b.value)
    return _Bin("+", a, b)


def _sub(a, b):
    if isinstance(b, _Num) and b.value == 0.0:
        return a
    if isinstance(a, _Num) and isinstance(b, _Num):
        return _num(a.value - b.value)
    if isinstance(a, _Num) and a.value == 0.0:
        return _neg(b)
    return _Bin("-", a, b)


def _mul(a, b):
    for u, v in ((a, b), (b, a)):
        if isinstance(u, _Num):
            if u.value == 0.0:
                return _num(0.0)
            if u.value == 1.0:
                return v
            if u.value == -1.0:
                return _neg(v)
    if isinstance(a, _Num) and isinstance(b, _Num):
        return _num(a.value * b.value)
    return _Bin("*", a, b)


def _div(a, b):
    if isinstance(b, _Num) and b.value == 1.0:
        return a
    if isinstance(a, _Num) and a.value == 0.0 and isinstance(b, _Num) and b.value != 0.0:
        return _num(0.0)
    return _Bin("/", a, b)


def _pow(a, b):
    if isinstance(b, _Num):
        if b.value == 1.0:
            return a
        if b.value == 0.0:
            return _num(1.0)
    return _Bin("^", a, b)


def _call(fn, a):
    return _Call(fn, a)


# ---------------------------------------------------------------------------
# Tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # Either junk, or pure trailing whitespace.
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, off = self.peek()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r}", off)
        self.next()

    def parse(self):
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {val!r}", off)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                node = _Bin(val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                node = _Bin(val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return _neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.next()
            # Right-associative; exponent may carry a unary minus.
            return _Bin("^", base, self.unary())
        return base

    def atom(self):
        kind, val, off = self.next()
        if kind == "num":
            return _Num(float(val))
        if kind == "ident":
            if val == "x":
                return _Var()
            if val == "pi":
                return _Num(math.pi)
            if val in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return _Call(val, arg)
            raise ExpressionError(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError(f"unexpected {val!r}" if val else "unexpected end of input", off)


# ---------------------------------------------------------------------------
# Evaluation


def _eval(node, x):
    match node:
        case _Num(value=v):
            return np.full_like(x, v) if np.ndim(x) else v
        case _Var():
            return x
        case _Neg(arg=a):
            return -_eval(a, x)
        case _Bin(op="+", lhs=a, rhs=b):
            return _eval(a, x) + _eval(b, x)
        case _Bin(op="-", lhs=a, rhs=b):
            return _eval(a, x) - _eval(b, x)
        case _Bin(op="*", lhs=a, rhs=b):
            return _eval(a, x) * _eval(b, x)
        case _Bin(op="/", lhs=a, rhs=b):
            den = _eval(b, x)
            if np.any(den == 0.0):
                raise EvaluationError("division by zero")
            return _eval(a, x) / den
        case _Bin(op="^", lhs=a, rhs=b):
            return np.power(_eval(a, x), _eval(b, x))
        case _Call(fn=fn, arg=a):
            u = _eval(a, x)
            if fn == "log":
                if np.any(u <= 0.0):
                    raise EvaluationError("log of a non-positive value")
                return np.log(u)
            if fn == "sqrt":
                if np.any(u < 0.0):
                    raise EvaluationError("sqrt of a negative value")
                return np.sqrt(u)
            return getattr(np, fn)(u)
    raise TypeError(f"bad node {node!r}")


# ---------------------------------------------------------------------------
# Differentiation


def _diff(node):
    match node:
        case _Num():
            return _num(0.0)
        case _Var():
            return _num(1.0)
        case _Neg(arg=a):
            return _neg(_diff(a))
        case _Bin(op="+", lhs=a, rhs=b):
            return _add(_diff(a), _diff(b))
        case _Bin(op="-", lhs=a, rhs=b):
            return _sub(_diff(a), _diff(b))
        case _Bin(op="*", lhs=a, rhs=b):
            return _add(_mul(_diff(a), b), _mul(a, _diff(b)))
        case _Bin(op="/", lhs=a, rhs=b):
            num = _sub(_mul(_diff(a), b), _mul(a, _diff(b)))
            return _div(num, _pow(b, _num(2.0)))
        case _Bin(op="^", lhs=f, rhs=_Num(value=c)):
            # d f^c = c f^(c-1) f'
            return _mul(_mul(_num(c), _pow(f, _num(c - 1.0))), _diff(f))
        case _Bin(op="^", lhs=f, rhs=g):
            # f^g = exp(g log f); stays inside the language.
            inner = _add(_mul(_diff(g), _call("log", f)), _div(_mul(g, _diff(f)), f))
            return _mul(_pow(f, g), inner)
        case _Call(fn=fn, arg=u):
            du = _diff(u)
            if fn == "exp":
                outer = _call("exp", u)
            elif fn == "log":
                return _div(du, u)
            elif fn == "tanh":
                outer = _sub(_num(1.0), _pow(_call("tanh", u), _num(2.0)))
            elif fn == "cosh":
                # sinh written through exp to stay in the language
                outer = _div(_sub(_call("exp", u), _call("exp", _neg(u))), _num(2.0))
            elif fn == "sin":
                outer = _call("cos", u)
            elif fn == "cos":
                outer = _neg(_call("sin", u))
            elif fn == "sqrt":
                return _div(du, _mul(_num(2.0), _call("sqrt", u)))
            else:  # pragma: no cover
                raise TypeError(fn)
            return _mul(outer, du)
    raise TypeError(f"bad node {node!r}")


# ---------------------------------------------------------------------------
# Printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node):
    match node:
        case _Num(value=v):
            return 3 if v < 0 else 5  # a negative literal prints with a minus
        case _Var() | _Call():
            return 5
        case _Neg():
            return _PREC["neg"]
        case _Bin(op=op):
            return _PREC[op]
    raise TypeError(node)


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _print(node) -> str:
    match node:
        case _Num(value=v):
            return _fmt_num(v)
        case _Var():
            return "x"
        case _Neg(arg=a):
            s = _print(a)
            if _prec(a) <= _PREC["neg"]:
                s = f"({s})"
            return f"-{s}"
        case _Bin(op=op, lhs=a, rhs=b):
            pa, pb = _prec(a), _prec(b)
            p = _PREC[op]
            sa = _print(a)
            sb = _print(b)
            if op == "^":
                # right-associative; the parser reads the exponent at unary
                # level, so a bare -3 or -x exponent needs no parentheses
                if pa <= p:
                    sa = f"({sa})"
                if pb < _PREC["neg"]:
                    sb = f"({sb})"
            else:
                if pa < p:
                    sa = f"({sa})"
                if pb < p or (pb == p and op in ("-", "/")):
                    sb = f"({sb})"
                # a*b with b a negative literal still re-parses correctly
            return f"{sa}{op}{sb}"
        case _Call(fn=fn, arg=a):
            return f"{fn}({_print(a)})"
    raise TypeError(node)


# ---------------------------------------------------------------------------
# Public wrapper


class FunctionExpr:
    """A parsed closed-form function of x.

    Instances evaluate vectorized over numpy arrays, differentiate
    symbolically (the result is again a FunctionExpr), and print to a
    string that re-parses to an equal tree.
    """

    __slots__ = ("_root",)

    def __init__(self, root):
        self._root = root

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = _eval(self._root, arr)
        out = np.asarray(out, dtype=float)
        if np.all(np.isfinite(arr)) and not np.all(np.isfinite(out)):
            raise EvaluationError(f"non-finite value evaluating {self}")
        if np.ndim(x) == 0:
            return float(out)
        return out

    def derivative(self) -> "FunctionExpr":
        return FunctionExpr(_diff(self._root))

    def __str__(self) -> str:
        return _print(self._root)

    def __repr__(self) -> str:
        return f"parse_expression({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionExpr) and self._root == other._root

    def __hash__(self):
        return hash(str(self))


def parse_expression(text: str) -> FunctionExpr:
    """Parse ``text`` into a FunctionExpr.

    Raises ExpressionError (with the byte offset) on syntax problems or
    unknown identifiers.
    """
    return FunctionExpr(_Parser(text).parse())
