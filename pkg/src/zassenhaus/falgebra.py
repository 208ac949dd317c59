"""The graded algebra of symmetrised terms <f>_k = (f d^k + d^k f)/2.

An :class:`FTerm` is a finite sum of such terms, each weighted by a scalar
``q * i^a * t^b * eps^c``.  Internally a component is keyed by
``(k, a mod 2, b, c)``; the rational ``q`` and the sign from ``i^2 = -1`` are
folded into the coefficients of the component's :class:`DiffPoly`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .coefficients import format_rational, gamma_coeff, lambda_coeff, pi_total
from .diffpoly import DiffPoly, _sup, format_unicode
from .errors import CoefficientRangeError

_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True)
class ScaledScalar:
    """q * i^i_pow * t^t_pow * eps^eps_pow."""

    q: Fraction = Fraction(1)
    i_pow: int = 0
    t_pow: int = 0
    eps_pow: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "i_pow", self.i_pow % 4)
        if self.t_pow < 0:
            raise ValueError("t_pow must be non-negative")

    def __mul__(self, other: "ScaledScalar") -> "ScaledScalar":
        return ScaledScalar(
            self.q * other.q,
            self.i_pow + other.i_pow,
            self.t_pow + other.t_pow,
            self.eps_pow + other.eps_pow,
        )

    def folded(self):
        """(signed q, i_pow mod 2): i^2 = -1 moved into the rational."""
        sign = -1 if self.i_pow >= 2 else 1
        return sign * self.q, self.i_pow % 2

    def to_complex(self, t: float, eps: float) -> complex:
        return float(self.q) * (1j**self.i_pow) * t**self.t_pow * eps**self.eps_pow


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"
    ZERO = "zero"


def _combine(out: dict, key, poly: DiffPoly):
    if poly.is_zero():
        return
    prev = out.get(key)
    total = poly if prev is None else prev + poly
    if total.is_zero():
        out.pop(key, None)
    else:
        out[key] = total


class FTerm:
    """Finite sum of scalar-weighted symmetrised terms.

    ``components`` maps ``(k, i_pow, t_pow, eps_pow)`` to a DiffPoly, with
    ``i_pow`` in {0, 1}.  Instances are immutable by convention.
    """

    __slots__ = ("components", "_hash")

    def __init__(self, components=None):
        self.components = {}
        for key, poly in (components or {}).items():
            k, ipow, tpow, epow = key
            if k < 0:
                raise CoefficientRangeError(f"height must be non-negative, got {k}")
            poly = DiffPoly.coerce(poly)
            if ipow % 4 >= 2:
                poly = -poly
            _combine(self.components, (k, ipow % 2, tpow, epow), poly)
        self._hash = None

    @classmethod
    def _raw(cls, components):
        obj = cls.__new__(cls)
        obj.components = components
        obj._hash = None
        return obj

    # construction ------------------------------------------------------------

    @classmethod
    def zero(cls) -> "FTerm":
        return cls._raw({})

    def is_zero(self) -> bool:
        return not self.components

    def __bool__(self):
        return bool(self.components)

    # linear structure ----------------------------------------------------------

    def __add__(self, other: "FTerm") -> "FTerm":
        if not isinstance(other, FTerm):
            return NotImplemented
        out = dict(self.components)
        for key, poly in other.components.items():
            _combine(out, key, poly)
        return FTerm._raw(out)

    def __neg__(self):
        return FTerm._raw({key: -p for key, p in self.components.items()})

    def __sub__(self, other):
        if not isinstance(other, FTerm):
            return NotImplemented
        return self + (-other)

    def scale(self, s) -> "FTerm":
        """Multiply by a ScaledScalar or a plain rational."""
        if not isinstance(s, ScaledScalar):
            s = ScaledScalar(Fraction(s))
        q, ipow = s.folded()
        if q == 0:
            return FTerm.zero()
        out = {}
        for (k, a, b, c), poly in self.components.items():
            coeff = q
            if a + ipow == 2:
                coeff = -coeff
            out[(k, (a + ipow) % 2, b + s.t_pow, c + s.eps_pow)] = poly.scale(coeff)
        return FTerm._raw(out)

    def __rmul__(self, s):
        return self.scale(s)

    def __mul__(self, s):
        if isinstance(s, FTerm):
            return assoc_mul(self, s)
        return self.scale(s)

    def __eq__(self, other):
        if not isinstance(other, FTerm):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.components.items()))
        return self._hash

    # filtering -----------------------------------------------------------------

    def select(self, pred) -> "FTerm":
        """Keep the components whose key ``(k, i, t, eps)`` satisfies ``pred``."""
        return FTerm._raw({key: p for key, p in self.components.items() if pred(key)})

    def t_part(self, degree: int) -> "FTerm":
        return self.select(lambda key: key[2] == degree)

    def truncate_t(self, max_t: int) -> "FTerm":
        return self.select(lambda key: key[2] <= max_t)

    def t_degrees(self) -> list:
        return sorted({key[2] for key in self.components})

    def heights(self) -> list:
        return sorted({key[0] for key in self.components})

    def sigma_orders(self, sigma) -> list:
        sigma = Fraction(sigma)
        return sorted({sigma_order(key, sigma) for key in self.components})

    def symbols(self) -> set:
        out = set()
        for p in self.components.values():
            out |= p.symbols()
        return out

    def derivative_orders(self) -> dict:
        orders = {}
        for p in self.components.values():
            for name, ds in p.derivative_orders().items():
                orders.setdefault(name, set()).update(ds)
        return {name: sorted(ds) for name, ds in sorted(orders.items())}

    def substitute(self, mapping: dict) -> "FTerm":
        """Rename symbols, e.g. ``{"V": "V1"}``."""
        out = {}
        for key, poly in self.components.items():
            terms = {}
            for m, c in poly.terms.items():
                m2 = tuple(sorted((mapping.get(n, n), o, e) for n, o, e in m))
                terms[m2] = terms.get(m2, 0) + c
            _combine(out, key, DiffPoly(terms))
        return FTerm._raw(out)

    # rendering -----------------------------------------------------------------

    def sorted_items(self):
        return sorted(self.components.items(), key=lambda kv: (kv[0][2], kv[0][0], -kv[0][3], kv[0][1]))

    def to_text(self, style: str = "unicode") -> str:
        if not self.components:
            return "0"
        pieces = []
        for idx, (key, poly) in enumerate(self.sorted_items()):
            sign, body = _render_component(key, poly, style)
            minus = "−" if style == "unicode" else "-"
            if idx == 0:
                pieces.append(f"{minus}{body}" if sign < 0 else body)
            else:
                pieces.append(f" {minus if sign < 0 else '+'} {body}")
        return "".join(pieces)

    def __str__(self):
        return self.to_text("unicode")

    def __repr__(self):
        return f"FTerm({self.to_text('ascii')!r})"

    def to_json(self) -> list:
        return [
            {
                "k": k,
                "scalar": {"q": "1", "i": a, "t": b, "eps": c},
                "poly": poly.to_json(),
            }
            for (k, a, b, c), poly in self.sorted_items()
        ]

    @classmethod
    def from_json(cls, data: list) -> "FTerm":
        out = FTerm.zero()
        for item in data:
            sc = item["scalar"]
            poly = DiffPoly.from_json(item["poly"])
            term = FTerm({(item["k"], 0, 0, 0): poly})
            out = out + term.scale(ScaledScalar(Fraction(sc["q"]), sc["i"], sc["t"], sc["eps"]))
        return out


def _scalar_text(a, b, c, style):
    if style == "unicode":
        parts = ["i" if a else "", "" if b == 0 else "t" + ("" if b == 1 else _sup(b))]
        parts.append("" if c == 0 else "ε" + ("" if c == 1 else _sup(c)))
        return "".join(parts)
    parts = ["i"] if a else []
    if b:
        parts.append("t" if b == 1 else f"t^{b}")
    if c:
        parts.append("eps" if c == 1 else f"eps^{c}")
    return "*".join(parts)


def _render_component(key, poly: DiffPoly, style):
    """(sign, text) of one component, pulling a lone coefficient outside."""
    k, a, b, c = key
    scalar = _scalar_text(a, b, c, style)
    if style == "unicode":
        open_, close = "⟨", "⟩" + str(k).translate(_SUBSCRIPT)
    else:
        open_, close = "<", f">_{k}"
    sign = 1
    coeff = ""
    if len(poly.terms) == 1:
        (m, q), = poly.terms.items()
        sign = -1 if q < 0 else 1
        if abs(q) != 1:
            coeff = format_unicode(q) if style == "unicode" else format_rational(abs(q))
        inner = DiffPoly({m: 1}).to_text(style)
    else:
        inner = poly.to_text(style)
    if style == "unicode":
        sep = " " if coeff and scalar else ""
        return sign, f"{coeff}{sep}{scalar}{open_}{inner}{close}"
    prefix = "*".join(x for x in (coeff, scalar) if x)
    return sign, (prefix + "*" if prefix else "") + f"{open_}{inner}{close}"


def sigma_order(key, sigma) -> Fraction:
    """eps-exponent of a component when t = O(eps^sigma) and <f>_k = O(eps^-k)."""
    k, _, tpow, epow = key
    return Fraction(sigma) * tpow + epow - k


def scalar(q=1, i=0, t=0, eps=0) -> ScaledScalar:
    return ScaledScalar(Fraction(q), i, t, eps)


def ang(f, k: int, weight: ScaledScalar | None = None) -> FTerm:
    """The single term <f>_k, optionally scaled; ``ang(1, k)`` is d^k."""
    if k < 0:
        raise CoefficientRangeError(f"height must be non-negative, got {k}")
    term = FTerm({(k, 0, 0, 0): DiffPoly.coerce(f)})
    return term if weight is None else term.scale(weight)


def _merge_scalars(ka, kb):
    """Scalar part of a product of two component keys: (sign, i, t, eps)."""
    _, a1, t1, e1 = ka
    _, a2, t2, e2 = kb
    a = a1 + a2
    return (-1 if a == 2 else 1), a % 2, t1 + t2, e1 + e2


class _DerivProducts:
    """Cache of D^i x * D^j y for one pair of polynomials."""

    def __init__(self, x: DiffPoly, y: DiffPoly):
        self.x, self.y = x, y
        self.cache = {}

    def __call__(self, i, j):
        key = (i, j)
        val = self.cache.get(key)
        if val is None:
            val = self.x.derive(i) * self.y.derive(j)
            self.cache[key] = val
        return val


def _pair_product(k, l, x, y, n_values, coeff):
    """Sum over n in n_values of <sum_i coeff(n, i) D^i x D^(n-i) y>_{k+l-n}."""
    prods = _DerivProducts(x, y)
    out = {}
    for n in n_values:
        acc = {}
        for i in range(n + 1):
            c = coeff(n, i)
            if c:
                for m, v in prods(i, n - i).terms.items():
                    acc[m] = acc.get(m, 0) + c * v
        poly = DiffPoly({m: v for m, v in acc.items() if v})
        if not poly.is_zero():
            out[k + l - n] = poly
    return out


def _bilinear(a: FTerm, b: FTerm, pair, max_t=None) -> FTerm:
    out = {}
    for ka, x in a.components.items():
        for kb, y in b.components.items():
            sign, ipow, tpow, epow = _merge_scalars(ka, kb)
            if max_t is not None and tpow > max_t:
                continue
            for height, poly in pair(ka[0], kb[0], x, y).items():
                _combine(out, (height, ipow, tpow, epow), poly if sign > 0 else -poly)
    return FTerm._raw(out)


def assoc_mul(a: FTerm, b: FTerm, max_t: int | None = None) -> FTerm:
    """Associative product; components with t-degree above ``max_t`` are dropped."""

    def pair(k, l, x, y):
        return _pair_product(k, l, x, y, range(k + l + 1), lambda n, i: pi_total(k, l, n, i))

    return _bilinear(a, b, pair, max_t)


def commutator(a: FTerm, b: FTerm, max_t: int | None = None) -> FTerm:
    """Lie bracket expanded directly with the lambda coefficients."""

    def pair(k, l, x, y):
        if k + l == 0:
            return {}
        ns = range((k + l - 1) // 2 + 1)
        return _pair_product(
            k, l, x, y, [2 * n + 1 for n in ns], lambda n, i: lambda_coeff(k, l, n // 2, i)
        )

    return _bilinear(a, b, pair, max_t)


def jordan(a: FTerm, b: FTerm, max_t: int | None = None) -> FTerm:
    """Symmetrised product (ab + ba)/2, using gamma at even n only."""

    def pair(k, l, x, y):
        return _pair_product(
            k, l, x, y, range(0, k + l + 1, 2), lambda n, i: gamma_coeff(k, l, n, i)
        )

    return _bilinear(a, b, pair, max_t)


def height(a: FTerm) -> int:
    return max((key[0] for key in a.components), default=-1)


def parity(a: FTerm) -> Parity:
    ks = {key[0] % 2 for key in a.components}
    if not ks:
        return Parity.ZERO
    if ks == {0}:
        return Parity.EVEN
    if ks == {1}:
        return Parity.ODD
    return Parity.MIXED


def skew_hermitian_check(a: FTerm) -> bool:
    """True iff every component is i^(k+1) times a real weight."""
    return all(ipow == (k + 1) % 2 for (k, ipow, _, _) in a.components)


def nested_commutator(terms: Iterable[FTerm]) -> FTerm:
    """[t1, [t2, [... , tn]]] (right-nested)."""
    terms = list(terms)
    acc = terms[-1]
    for t in reversed(terms[:-1]):
        acc = commutator(t, acc)
    return acc


def fla_reconstruct_check(x, n: int) -> bool:
    """Rebuild <Dx>_2n and <Dx>_2n+1 from commutators of d^m with <x>_0.

    The commutator [<1>_m, <x>_0] only involves lambda_{s,0} terms, so the
    lowest-order piece can be isolated by subtracting the higher derivatives.
    """
    if n < 1:
        raise CoefficientRangeError("n must be at least 1")
    x = DiffPoly.coerce(x)
    base = ang(x, 0)
    ok = True
    for m, target_k in ((2 * n + 1, 2 * n), (2 * n + 2, 2 * n + 1)):
        bracket = commutator(ang(1, m), base)
        if bracket != assoc_mul(ang(1, m), base) - assoc_mul(base, ang(1, m)):
            return False
        lead = lambda_coeff(m, 0, 0, 0)
        rhs = bracket.scale(1 / lead)
        for s in range(1, (m - 1) // 2 + 1):
            rhs = rhs - ang(x.derive(2 * s + 1), m - 1 - 2 * s).scale(lambda_coeff(m, 0, s, 0) / lead)
        ok = ok and rhs == ang(x.derive(1), target_k)
    return ok
