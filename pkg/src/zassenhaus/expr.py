"""Closed-form potentials V(x): parsing, symbolic derivatives, evaluation.

Grammar (recursive descent)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' integer)?
    base   := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')'
    func   := 'sin' | 'cos' | 'exp'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError


class Expr:
    """Base class of expression nodes (immutable dataclasses)."""

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Pi(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


FUNCS = {"sin": Sin, "cos": Cos, "exp": Exp}

ZERO = Num(Fraction(0))
ONE = Num(Fraction(1))

# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", m.group(1), start + 1))
        elif m.group(2):
            tokens.append(("ident", m.group(2), start + 1))
        elif m.group(3).strip():
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start + 1)
            tokens.append(("op", ch, start + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, text, col = self.take()
        if text != value or kind == "end" and value:
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", col)

    def parse(self):
        node = self.expr()
        kind, text, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", col)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.factor())
        node = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, text, col = self.take()
            if kind != "num" or not text.isdigit():
                raise ParseError("exponent must be an integer", col)
            node = Pow(node, sign * int(text))
        return node

    def base(self):
        kind, text, col = self.take()
        if kind == "num":
            return Num(Fraction(text))
        if kind == "ident":
            if text == "x":
                return Var()
            if text == "pi":
                return Pi()
            if text in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return FUNCS[text](arg)
            raise ParseError(f"unknown identifier {text!r}", col)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", col)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises :class:`ParseError`."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# simplifying constructors


def _num(node):
    return node.value if isinstance(node, Num) else None


def add(a, b):
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va + vb)
    if va == 0:
        return b
    if vb == 0:
        return a
    if isinstance(b, Neg):
        return sub(a, b.arg)
    return Add(a, b)


def sub(a, b):
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va - vb)
    if vb == 0:
        return a
    if va == 0:
        return neg(b)
    return Sub(a, b)


def neg(a):
    va = _num(a)
    if va is not None:
        return Num(-va)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Num(va * vb)
    if va == 0 or vb == 0:
        return ZERO
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return neg(b)
    if vb == -1:
        return neg(a)
    if isinstance(a, Neg):
        return neg(mul(a.arg, b))
    if isinstance(b, Neg):
        return neg(mul(a, b.arg))
    if vb is not None:
        return Mul(b, a)
    return Mul(a, b)


def div(a, b):
    va, vb = _num(a), _num(b)
    if vb == 0:
        raise ZeroDivisionError("division by literal zero")
    if va is not None and vb is not None:
        return Num(va / vb)
    if va == 0:
        return ZERO
    if vb == 1:
        return a
    return Div(a, b)


def power(a, n):
    if n == 0:
        return ONE
    if n == 1:
        return a
    va = _num(a)
    if va is not None and (va != 0 or n > 0):
        return Num(va**n)
    return Pow(a, n)


# ---------------------------------------------------------------------------
# calculus


def _d(e: Expr) -> Expr:
    if isinstance(e, (Num, Pi)):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return sub(_d(e.left), _d(e.right))
    if isinstance(e, Neg):
        return neg(_d(e.arg))
    if isinstance(e, Mul):
        return add(mul(_d(e.left), e.right), mul(e.left, _d(e.right)))
    if isinstance(e, Div):
        num = sub(mul(_d(e.left), e.right), mul(e.left, _d(e.right)))
        return div(num, power(e.right, 2))
    if isinstance(e, Pow):
        return mul(mul(Num(Fraction(e.exponent)), power(e.base, e.exponent - 1)), _d(e.base))
    if isinstance(e, Sin):
        return mul(Cos(e.arg), _d(e.arg))
    if isinstance(e, Cos):
        return neg(mul(Sin(e.arg), _d(e.arg)))
    if isinstance(e, Exp):
        return mul(e, _d(e.arg))
    raise TypeError(f"not an expression node: {e!r}")


def expr_derivative(e: Expr, order: int = 1) -> Expr:
    """Exact symbolic derivative d^order e / dx^order."""
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    for _ in range(order):
        e = _d(e)
    return e


class DerivativeCache:
    """Memoised derivatives of one expression, indexed by order."""

    def __init__(self, e: Expr):
        self._derivs = [e]

    def __getitem__(self, order: int) -> Expr:
        while len(self._derivs) <= order:
            self._derivs.append(_d(self._derivs[-1]))
        return self._derivs[order]


def evaluate(e: Expr, x):
    """Evaluate at the points ``x`` (scalar or array), in float64."""
    x = np.asarray(x, dtype=float)
    if isinstance(e, Num):
        return np.full_like(x, float(e.value))
    if isinstance(e, Var):
        return x.copy()
    if isinstance(e, Pi):
        return np.full_like(x, np.pi)
    if isinstance(e, Add):
        return evaluate(e.left, x) + evaluate(e.right, x)
    if isinstance(e, Sub):
        return evaluate(e.left, x) - evaluate(e.right, x)
    if isinstance(e, Mul):
        return evaluate(e.left, x) * evaluate(e.right, x)
    if isinstance(e, Div):
        return evaluate(e.left, x) / evaluate(e.right, x)
    if isinstance(e, Neg):
        return -evaluate(e.arg, x)
    if isinstance(e, Pow):
        return evaluate(e.base, x) ** e.exponent
    if isinstance(e, Sin):
        return np.sin(evaluate(e.arg, x))
    if isinstance(e, Cos):
        return np.cos(evaluate(e.arg, x))
    if isinstance(e, Exp):
        return np.exp(evaluate(e.arg, x))
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _format_number(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        # terminating decimal: print exactly
        sign = "-" if q < 0 else ""
        q = abs(q)
        whole = q.numerator // q.denominator
        frac = q - whole
        digits = []
        while frac:
            frac *= 10
            digits.append(str(frac.numerator // frac.denominator))
            frac -= frac.numerator // frac.denominator
        return f"{sign}{whole}." + "".join(digits)
    return f"({q.numerator}/{q.denominator})"


def to_text(e: Expr) -> str:
    """Print in the parser's grammar; ``parse_expr(to_text(e))`` re-reads it."""
    return _fmt(e, 0)


def _fmt(e, parent_prec, right_side=False):
    if isinstance(e, Num):
        text = _format_number(e.value)
        if e.value < 0 and parent_prec > 0:
            return f"({text})"
        return text
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, (Sin, Cos, Exp)):
        return f"{type(e).__name__.lower()}({_fmt(e.arg, 0)})"
    prec = _PREC[type(e)]
    if isinstance(e, Neg):
        text = "-" + _fmt(e.arg, prec)
    elif isinstance(e, Pow):
        text = f"{_fmt(e.base, prec + 1)}^{e.exponent}"
    else:
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        text = f"{_fmt(e.left, prec)}{op}{_fmt(e.right, prec, right_side=True)}"
    # left-associative operators: a right operand of equal precedence needs parentheses
    if prec < parent_prec or (right_side and prec == parent_prec):
        return f"({text})"
    return text
