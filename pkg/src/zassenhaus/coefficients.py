"""Structure coefficients of the symmetrised product.

The product of two symmetrised terms expands as

    <x>_k . <y>_l = sum_n <z_n>_{k+l-n},   z_n = sum_i pi[k,l,n,i] D^i x D^(n-i) y

and everything else (commutator, Jordan product) is derived from ``pi``.
Three independent routes to ``pi`` live here: the triangular recursion,
the closed form through Bernoulli numbers, and extraction from the
generating function.  All arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .errors import CoefficientRangeError

KINDS = ("pi", "lambda", "mu", "gamma")


def binom(n: int, m: int) -> int:
    """Binomial coefficient, zero whenever ``m < 0`` or ``m > n``."""
    if m < 0 or n < 0 or m > n:
        return 0
    return comb(n, m)


class _Memo:
    """Unbounded cache; lock-free reads, serialised writes."""

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def __len__(self):
        return len(self._data)


_bernoulli_memo = _Memo()
_pi_memo = _Memo()


def bernoulli(r: int) -> Fraction:
    """Bernoulli number B_r with the convention B_1 = -1/2.

    Uses sum_{j<=r} C(r+1, j) B_j = 0 for r >= 1.
    """
    if r < 0:
        raise CoefficientRangeError(f"bernoulli index must be >= 0, got {r}")
    cached = _bernoulli_memo.get(r)
    if cached is not None:
        return cached
    if r == 0:
        value = Fraction(1)
    else:
        # fill bottom-up so deep indices do not recurse
        for j in range(1, r):
            if _bernoulli_memo.get(j) is None:
                bernoulli(j)
        acc = sum((binom(r + 1, j) * bernoulli(j) for j in range(r)), Fraction(0))
        value = -acc / (r + 1)
    return _bernoulli_memo.put(r, value)


def p_r(r: int) -> Fraction:
    """P_r = (-1)^r (2^r - 1) B_r."""
    return (-1) ** r * (2**r - 1) * bernoulli(r)


def l_value(k: int, l: int, a: int, p: int) -> Fraction:
    """Right-hand side L_{a,p}^{k,l} of the matching conditions for pi."""
    if min(k, l, a, p) < 0 or a > k + l or p > a:
        raise CoefficientRangeError(f"L index out of range: k={k} l={l} a={a} p={p}")
    return Fraction(_l_total(k, l, a, p))


def _l_total(k, l, a, p):
    delta = binom(k, a) + binom(k + l, a) if p == 0 else 0
    return delta + binom(k, p) * (binom(k - p, a - p) + binom(k + l - p, a - p))


def _check_key(k, l, n, i):
    if min(k, l, n, i) < 0 or n > k + l or i > n:
        raise CoefficientRangeError(f"pi index out of range: k={k} l={l} n={n} i={i}")


def pi_recursive(k: int, l: int, n: int, i: int) -> Fraction:
    """pi_{n,i}^{k,l} from the triangular recursion, starting at pi_{0,0} = 1."""
    _check_key(k, l, n, i)
    return _pi_rec(k, l, n, i)


def _pi_rec(k, l, a, p):
    key = (k, l, a, p)
    cached = _pi_memo.get(key)
    if cached is not None:
        return cached
    acc = Fraction(0)
    for n in range(a):
        weight = binom(k + l - n, a - n)
        if weight == 0:
            continue
        inner = Fraction(0)
        for i in range(n + 1):
            b = binom(a - n, p - i)
            if b:
                inner += _pi_rec(k, l, n, i) * b
        acc += weight * inner
    value = (_l_total(k, l, a, p) - 2 * acc) / 4
    return _pi_memo.put(key, value)


def _a_entry(q, n, i, s, j):
    if n < s or i < j:
        return Fraction(0)
    r = n - s + 1
    value = -p_r(r) / r * binom(q - s, n - s) * binom(n - s, i - j)
    if n == s and i == j:
        value += 1
    return value


def pi_explicit(k: int, l: int, n: int, i: int) -> Fraction:
    """pi_{n,i}^{k,l} from the closed form (1/2) sum A_{(n,i),(s,j)} L_{s,j}."""
    _check_key(k, l, n, i)
    q = k + l
    total = Fraction(0)
    for s in range(n + 1):
        for j in range(min(i, s) + 1):
            lv = _l_total(k, l, s, j)
            if lv:
                total += _a_entry(q, n, i, s, j) * lv
    return total / 2


def pi_total(k: int, l: int, n: int, i: int) -> Fraction:
    """Like :func:`pi_recursive` but zero outside the index range."""
    if min(k, l, n, i) < 0 or n > k + l or i > n:
        return Fraction(0)
    return _pi_rec(k, l, n, i)


def lambda_coeff(k: int, l: int, n: int, i: int) -> Fraction:
    """Commutator coefficient lambda_{n,i}^{k,l} = 2 pi_{2n+1,i}^{k,l}."""
    if min(k, l, n, i) < 0 or 2 * n + 1 > k + l or i > 2 * n + 1:
        raise CoefficientRangeError(f"lambda index out of range: k={k} l={l} n={n} i={i}")
    return 2 * _pi_rec(k, l, 2 * n + 1, i)


def mu_coeff(k: int, l: int, n: int, i: int) -> Fraction:
    _check_key(k, l, n, i)
    return _pi_rec(k, l, n, i) - _pi_rec(l, k, n, n - i)


def gamma_coeff(k: int, l: int, n: int, i: int) -> Fraction:
    _check_key(k, l, n, i)
    return (_pi_rec(k, l, n, i) + _pi_rec(l, k, n, n - i)) / 2


_COEFF_FUNCS = {
    "pi": pi_recursive,
    "lambda": lambda_coeff,
    "mu": mu_coeff,
    "gamma": gamma_coeff,
}


def coefficient(kind: str, k: int, l: int, n: int, i: int) -> Fraction:
    try:
        func = _COEFF_FUNCS[kind]
    except KeyError:
        raise ValueError(f"unknown coefficient kind {kind!r}; expected one of {KINDS}") from None
    return func(k, l, n, i)


def index_range(kind: str, k: int, l: int):
    """Yield the valid (n, i) pairs of ``kind`` for fixed (k, l)."""
    if kind == "lambda":
        for n in range((k + l - 1) // 2 + 1 if k + l >= 1 else 0):
            for i in range(2 * n + 2):
                yield n, i
    else:
        for n in range(k + l + 1):
            for i in range(n + 1):
                yield n, i


def kl_pairs(kmax: int, kmin: int = 0):
    """(k, l) with kmin <= k+l <= kmax, ordered by k+l then descending k."""
    for total in range(kmin, kmax + 1):
        for k in range(total, -1, -1):
            yield k, total - k


# ---------------------------------------------------------------------------
# tables


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass
class CoeffTable:
    """Coefficients of one kind, keyed by (k, l, n, i)."""

    kind: str
    entries: dict = field(default_factory=dict)

    @classmethod
    def build(cls, kind: str, kmax: int, symmetric: bool = True) -> "CoeffTable":
        """All coefficients with k+l <= kmax.  ``symmetric=False`` keeps k >= l only."""
        if kind not in KINDS:
            raise ValueError(f"unknown coefficient kind {kind!r}; expected one of {KINDS}")
        table = cls(kind)
        kmin = 1 if kind == "lambda" else 0
        for k, l in kl_pairs(kmax, kmin):
            if not symmetric and k < l:
                continue
            for n, i in index_range(kind, k, l):
                table.entries[(k, l, n, i)] = coefficient(kind, k, l, n, i)
        return table

    def __getitem__(self, key):
        return self.entries[key]

    def verify(self) -> list:
        """Keys whose stored value differs from a fresh recomputation."""
        bad = []
        for (k, l, n, i), value in self.entries.items():
            if self.kind == "pi":
                fresh = pi_explicit(k, l, n, i)
            else:
                fresh = coefficient(self.kind, k, l, n, i)
            if fresh != value:
                bad.append((k, l, n, i))
        return bad

    def to_json(self) -> str:
        rows = [
            {"k": k, "l": l, "n": n, "i": i, "value": format_rational(v)}
            for (k, l, n, i), v in self.entries.items()
        ]
        return json.dumps({"kind": self.kind, "entries": rows}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        data = json.loads(text)
        table = cls(data["kind"])
        for row in data["entries"]:
            key = (row["k"], row["l"], row["n"], row["i"])
            table.entries[key] = parse_rational(row["value"])
        return table

    def to_csv(self) -> str:
        lines = ["kind,k,l,n,i,value"]
        for (k, l, n, i), v in self.entries.items():
            lines.append(f"{self.kind},{k},{l},{n},{i},{format_rational(v)}")
        return "\n".join(lines) + "\n"

    def render_text(self) -> str:
        """Row-per-n layout in the style of the printed coefficient tables."""
        rows = {}
        for (k, l, n, i), v in self.entries.items():
            rows.setdefault((k, l), {}).setdefault(n, {})[i] = v
        width = 1 + max((len(format_rational(v)) for v in self.entries.values()), default=1)
        ncols = 1 + max((i for (_, _, _, i) in self.entries), default=0)
        sym = {"pi": "pi", "lambda": "lambda", "mu": "mu", "gamma": "gamma"}[self.kind]
        header = f"{'(k,l)':<8}{'n':>3}  " + "".join(
            f"{sym + '_n,' + str(i):>{max(width, len(sym) + 5)}}" for i in range(ncols)
        )
        out = [header, "-" * len(header)]
        for (k, l), by_n in rows.items():
            for idx, n in enumerate(sorted(by_n)):
                label = f"({k},{l})" if idx == 0 else ""
                cells = "".join(
                    f"{format_rational(by_n[n][i]):>{max(width, len(sym) + 5)}}"
                    for i in sorted(by_n[n])
                )
                out.append(f"{label:<8}{n:>3}  {cells}")
            out.append("")
        return "\n".join(out).rstrip() + "\n"


# ---------------------------------------------------------------------------
# generating function


class Series4:
    """Truncated power series in (u, w, y, x) with rational coefficients.

    Monomials whose exponent in any variable exceeds its cap are dropped,
    which makes truncation an ideal: every retained coefficient is exact.
    """

    __slots__ = ("caps", "coeffs")

    def __init__(self, caps, coeffs=None):
        self.caps = tuple(caps)
        self.coeffs = {}
        if coeffs:
            for e, c in coeffs.items():
                if c and all(a <= b for a, b in zip(e, self.caps)):
                    self.coeffs[tuple(e)] = Fraction(c)

    @classmethod
    def constant(cls, caps, c=1):
        return cls(caps, {(0, 0, 0, 0): c})

    @classmethod
    def monomial(cls, caps, exps, c=1):
        return cls(caps, {tuple(exps): c})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Series4(self.caps, out)

    def __neg__(self):
        return Series4(self.caps, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Series4(self.caps, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, Series4):
            return self.scale(Fraction(other))
        cu, cw, cy, cx = self.caps
        out = {}
        for (a0, a1, a2, a3), c1 in self.coeffs.items():
            for (b0, b1, b2, b3), c2 in other.coeffs.items():
                e0, e1, e2, e3 = a0 + b0, a1 + b1, a2 + b2, a3 + b3
                if e0 > cu or e1 > cw or e2 > cy or e3 > cx:
                    continue
                key = (e0, e1, e2, e3)
                out[key] = out.get(key, 0) + c1 * c2
        return Series4(self.caps, out)

    __rmul__ = scale

    def constant_term(self) -> Fraction:
        return self.coeffs.get((0, 0, 0, 0), Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, exps) -> Fraction:
        return self.coeffs.get(tuple(exps), Fraction(0))

    def _powers(self):
        """Yield s^0, s^1, ... until the truncated power vanishes (needs zero constant term)."""
        if self.constant_term():
            raise ValueError("power series composition requires a zero constant term")
        power = Series4.constant(self.caps)
        while not power.is_zero():
            yield power
            power = power * self

    def exp(self):
        total = Series4(self.caps)
        for m, power in enumerate(self._powers()):
            total = total + power.scale(Fraction(1, factorial(m)))
        return total

    def cosh(self):
        total = Series4(self.caps)
        for m, power in enumerate(self._powers()):
            if m % 2 == 0:
                total = total + power.scale(Fraction(1, factorial(m)))
        return total

    def geometric(self):
        """1 / (1 - self)."""
        total = Series4(self.caps)
        for power in self._powers():
            total = total + power
        return total

    def inverse(self):
        """Multiplicative inverse; requires constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("series inversion implemented for unit constant term")
        return (Series4.constant(self.caps) - self).geometric()


def genfun_series(deg_u: int, deg_w: int, deg_y: int, deg_x: int) -> Series4:
    """Expand the closed-form generating function of pi as a truncated series.

    h = exp((wy - uxy)/2) / (1 - (w+u)) * cosh(uy/2) cosh(wxy/2) / cosh(y(u+w)(1+x)/2)
    """
    caps = (deg_u, deg_w, deg_y, deg_x)
    half = Fraction(1, 2)

    def mono(e, c=1):
        return Series4.monomial(caps, e, c)

    wy = mono((0, 1, 1, 0))
    uy = mono((1, 0, 1, 0))
    uxy = mono((1, 0, 1, 1))
    wxy = mono((0, 1, 1, 1))
    u = mono((1, 0, 0, 0))
    w = mono((0, 1, 0, 0))

    prefactor = ((wy - uxy) * half).exp()
    numerator = (uy * half).cosh() * (wxy * half).cosh()
    denominator = ((uy + wy + uxy + wxy) * half).cosh()
    return prefactor * (u + w).geometric() * numerator * denominator.inverse()


def pi_from_genfun(series: Series4, k: int, l: int, n: int, i: int) -> Fraction:
    """Read pi_{n,i}^{k,l} from the coefficient of u^l w^k y^n x^i."""
    _check_key(k, l, n, i)
    cu, cw, cy, cx = series.caps
    if l > cu or k > cw or n > cy or i > cx:
        raise CoefficientRangeError("series truncated below the requested coefficient")
    c = series.coefficient((l, k, n, i))
    return c * factorial(l) * factorial(k) / factorial(k + l - n)


# ---------------------------------------------------------------------------
# identities used in the proof of the closed form


def _inv_fact(m):
    return Fraction(0) if m < 0 else Fraction(1, factorial(m))


def _factorial_convolution_holds(a, n, s, p, j):
    lhs = sum(
        (
            _inv_fact(p - i) * _inv_fact(a - n - p + i) * _inv_fact(i - j) * _inv_fact(n - s - i + j)
            for i in range(j, p + 1)
        ),
        Fraction(0),
    )
    rhs = _inv_fact(a - n) * _inv_fact(n - s) * binom(a - s, p - j)
    return lhs == rhs


def bernoulli_sum_lhs(b: int) -> Fraction:
    return sum(
        (binom(b + 1, n + 1) * (2 ** (n + 1) - 1) * bernoulli(n + 1) for n in range(b + 1)),
        Fraction(0),
    )


def bernoulli_sum_rhs(b: int) -> Fraction:
    return Fraction(-1, 2) if b == 0 else -p_r(b + 1)


def p_sum_lhs(b: int) -> Fraction:
    return sum(
        (p_r(n + 1) / (factorial(n + 1) * factorial(b - n)) for n in range(b + 1)),
        Fraction(0),
    )


def p_sum_rhs(b: int) -> Fraction:
    value = Fraction(1, factorial(b))
    if b == 0:
        value -= Fraction(1, 2)
    else:
        value -= p_r(b + 1) / factorial(b + 1)
    return value


@dataclass
class IdentityReport:
    ok: bool
    checked: dict
    counterexample: tuple | None = None

    def summary(self) -> str:
        counts = ", ".join(f"{k}: {v}" for k, v in self.checked.items())
        if self.ok:
            return f"auxiliary identities hold ({counts})"
        return f"auxiliary identity FAILED at {self.counterexample} ({counts})"


def verify_auxiliary_identities(b_max: int) -> IdentityReport:
    """Exact check of the three auxiliary identities for parameters up to ``b_max``.

    The factorial convolution depends on (a, n, s, p, j) only through
    A = a-n, B = n-s and K = p-j; every (A, B, K) with A+B <= b_max is
    visited, instantiated at a few offsets (s, j).
    """
    if b_max < 0:
        raise ValueError("b_max must be non-negative")
    checked = {"factorial convolution": 0, "Bernoulli sum": 0, "p sum": 0}
    for big_a in range(b_max + 1):
        for big_b in range(b_max + 1 - big_a):
            for big_k in range(big_a + big_b + 1):
                for s, j in {(0, 0), ((big_a + big_k) % 3, (big_b + big_k) % 2)}:
                    n = s + big_b
                    a = n + big_a
                    p = j + big_k
                    checked["factorial convolution"] += 1
                    if not _factorial_convolution_holds(a, n, s, p, j):
                        return IdentityReport(False, checked, ("factorial convolution", a, n, s, p, j))
    for b in range(b_max + 1):
        checked["Bernoulli sum"] += 1
        if bernoulli_sum_lhs(b) != bernoulli_sum_rhs(b):
            return IdentityReport(False, checked, ("Bernoulli sum", b))
        checked["p sum"] += 1
        if p_sum_lhs(b) != p_sum_rhs(b):
            return IdentityReport(False, checked, ("p sum", b))
    return IdentityReport(True, checked)
