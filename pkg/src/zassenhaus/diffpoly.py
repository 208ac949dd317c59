"""Commutative differential polynomials over named symbols.

A monomial is a sorted tuple of ``(symbol, derivative_order, exponent)``
factors; the empty tuple is the ring unit.  The derivation ``D`` acts by
the Leibniz rule and raises derivative orders.  The ring is free
commutative, so canonical factor order makes equality syntactic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .coefficients import binom, format_rational

UNIT = ()

_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


_VULGAR = {
    (1, 2): "½", (1, 3): "⅓", (2, 3): "⅔", (1, 4): "¼", (3, 4): "¾",
    (1, 5): "⅕", (1, 6): "⅙", (5, 6): "⅚", (1, 8): "⅛", (3, 8): "⅜",
}


def _sup(n: int) -> str:
    return str(n).translate(_SUPERSCRIPT)


def format_unicode(q: Fraction) -> str:
    """Magnitude-only pretty rational: ½, ⅙, 7/2, 3."""
    q = abs(q)
    if q.denominator == 1:
        return str(q.numerator)
    return _VULGAR.get((q.numerator, q.denominator), f"{q.numerator}/{q.denominator}")


@lru_cache(maxsize=None)
def mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = {}
    for name, order, e in m1:
        exps[(name, order)] = e
    for name, order, e in m2:
        exps[(name, order)] = exps.get((name, order), 0) + e
    return tuple(sorted((n, o, e) for (n, o), e in exps.items()))


@lru_cache(maxsize=None)
def mono_derive(m: tuple) -> tuple:
    """D of a monomial as a tuple of (monomial, integer coefficient)."""
    out = {}
    for idx, (name, order, e) in enumerate(m):
        rest = m[:idx] + m[idx + 1 :]
        if e > 1:
            rest = mono_mul(rest, ((name, order, e - 1),))
        term = mono_mul(rest, ((name, order + 1, 1),))
        out[term] = out.get(term, 0) + e
    return tuple(out.items())


class DiffPoly:
    """Element of the differential polynomial ring, coefficients in Q.

    Treat instances as immutable; derivatives are cached on the instance.
    """

    __slots__ = ("terms", "_derivs", "_hash")

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)
        self._derivs = None
        self._hash = None

    # constructors ---------------------------------------------------------

    @classmethod
    def const(cls, c=1) -> "DiffPoly":
        return cls({UNIT: c})

    @classmethod
    def symbol(cls, name: str, order: int = 0) -> "DiffPoly":
        if name == "1":
            return cls.const(1) if order == 0 else cls()
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        return cls({((name, order, 1),): 1})

    @classmethod
    def coerce(cls, value) -> "DiffPoly":
        if isinstance(value, DiffPoly):
            return value
        if isinstance(value, str):
            return cls.symbol(value)
        return cls.const(value)

    # ring structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == UNIT for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(UNIT, Fraction(0))

    def __add__(self, other):
        other = DiffPoly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return DiffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-DiffPoly.coerce(other))

    def __rsub__(self, other):
        return DiffPoly.coerce(other) - self

    def scale(self, c) -> "DiffPoly":
        if not c:
            return DiffPoly()
        c = Fraction(c)
        return DiffPoly._raw({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            if isinstance(other, str):
                other = DiffPoly.symbol(other)
            else:
                return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return DiffPoly({m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._derivs = None
        obj._hash = None
        return obj

    # derivation ------------------------------------------------------------

    def derive(self, times: int = 1) -> "DiffPoly":
        """D^times of this polynomial (Leibniz rule, factor-wise)."""
        if times < 0:
            raise ValueError("derivative order must be non-negative")
        if self._derivs is None:
            self._derivs = [self]
        while len(self._derivs) <= times:
            prev = self._derivs[-1]
            out = {}
            for m, c in prev.terms.items():
                for dm, e in mono_derive(m):
                    out[dm] = out.get(dm, 0) + c * e
            self._derivs.append(DiffPoly({m: v for m, v in out.items() if v}))
        return self._derivs[times]

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def symbols(self) -> set:
        return {name for m in self.terms for name, _, _ in m}

    def derivative_orders(self) -> dict:
        """symbol -> sorted derivative orders appearing in this polynomial."""
        orders = {}
        for m in self.terms:
            for name, order, _ in m:
                orders.setdefault(name, set()).add(order)
        return {k: sorted(v) for k, v in orders.items()}

    def sorted_terms(self):
        def key(item):
            m, _ = item
            return (sum(o * e for _, o, e in m), tuple((n, o, e) for n, o, e in m))

        return sorted(self.terms.items(), key=key)

    # rendering -------------------------------------------------------------

    @staticmethod
    def _factor_ascii(name, order, e):
        base = name if order == 0 else ("D" if order == 1 else f"D^{order}") + f"[{name}]"
        return base if e == 1 else f"{base}^{e}"

    @staticmethod
    def _factor_unicode(name, order, e):
        deriv = "" if order == 0 else ("D" if order == 1 else "D" + _sup(order))
        base = deriv + name
        if e == 1:
            return base
        return (f"({base})" if order else base) + _sup(e)

    def to_text(self, style: str = "ascii") -> str:
        """Render as text; ``ascii`` writes D^i[f], ``unicode`` writes Dⁱf."""
        if not self.terms:
            return "0"
        render = self._factor_ascii if style == "ascii" else self._factor_unicode
        mult = "*" if style == "ascii" else " "
        minus = "-" if style == "ascii" else "−"
        fmt = format_rational if style == "ascii" else format_unicode
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = minus if c < 0 else "+"
            mag = abs(c)
            body = mult.join(render(*f) for f in m)
            if not body:
                text = fmt(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{fmt(mag)}{mult}{body}"
            if idx == 0:
                pieces.append(text if c > 0 else f"{minus}{text}")
            else:
                pieces.append(f" {sign} {text}")
        return "".join(pieces)

    def __str__(self):
        return self.to_text("ascii")

    def __repr__(self):
        return f"DiffPoly({self.to_text('ascii')!r})"

    def to_json(self) -> list:
        return [
            {
                "coeff": format_rational(c),
                "factors": [{"sym": n, "d": o, "e": e} for n, o, e in m],
            }
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list) -> "DiffPoly":
        terms = {}
        for item in data:
            m = tuple(sorted((f["sym"], f["d"], f["e"]) for f in item["factors"]))
            terms[m] = terms.get(m, 0) + Fraction(item["coeff"])
        return cls(terms)


def leibniz(p: DiffPoly, q: DiffPoly, k: int) -> DiffPoly:
    """sum_i C(k, i) D^i p D^(k-i) q, the binomial expansion of D^k(pq)."""
    total = DiffPoly()
    for i in range(k + 1):
        total = total + (p.derive(i) * q.derive(k - i)).scale(binom(k, i))
    return total
