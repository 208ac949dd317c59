"""Truncated exp/log calculus, symmetric BCH, Zassenhaus splittings, Magnus terms, cost model."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import format_rational, parse_rational
from .errors import DomainError
from .falgebra import FTerm, ang, assoc_mul, commutator, scalar, sigma_order

IDENTITY = ang(1, 0)


@dataclass(frozen=True)
class ExpSeries:
    """An element of the algebra truncated at t-degree ``order``."""

    term: FTerm
    order: int

    def __post_init__(self):
        object.__setattr__(self, "term", self.term.truncate_t(self.order))

    @property
    def terms(self) -> dict:
        return {d: self.term.t_part(d) for d in self.term.t_degrees()}

    def __add__(self, other: "ExpSeries") -> "ExpSeries":
        return ExpSeries(self.term + other.term, min(self.order, other.order))

    def __sub__(self, other: "ExpSeries") -> "ExpSeries":
        return ExpSeries(self.term - other.term, min(self.order, other.order))

    def __mul__(self, other: "ExpSeries") -> "ExpSeries":
        n = min(self.order, other.order)
        return ExpSeries(assoc_mul(self.term, other.term, max_t=n), n)

    def scale(self, c) -> "ExpSeries":
        return ExpSeries(self.term.scale(c), self.order)


def _power_sum(x: ExpSeries, coeffs) -> ExpSeries:
    """sum_m coeffs[m] x^m for m >= 1; x has no t^0 part so x^m starts at t^m."""
    total = FTerm.zero()
    power = x
    for m in range(1, x.order + 1):
        if power.term.is_zero():
            break
        total = total + power.term.scale(coeffs(m))
        if m < x.order:
            power = power * x
    return ExpSeries(total, x.order)


def exp_series(a: ExpSeries) -> ExpSeries:
    if 0 in a.term.t_degrees():
        raise DomainError("exp_series needs a series without a t^0 part")
    body = _power_sum(a, lambda m: Fraction(1, math.factorial(m)))
    return ExpSeries(IDENTITY + body.term, a.order)


def log_series(e: ExpSeries) -> ExpSeries:
    if e.term.t_part(0) != IDENTITY:
        raise DomainError("log_series needs the t^0 part to be the identity")
    y = ExpSeries(e.term - IDENTITY, e.order)
    return _power_sum(y, lambda m: Fraction((-1) ** (m + 1), m))


def _sbch_general(a: FTerm, b: FTerm, n_max: int) -> FTerm:
    ha = exp_series(ExpSeries(a.scale(Fraction(1, 2)), n_max))
    eb = exp_series(ExpSeries(b, n_max))
    return log_series(ha * eb * ha).term


def sbch(a: FTerm, b: FTerm, n_max: int) -> FTerm:
    """log(exp(a/2) exp(b) exp(a/2)) up to t-degree ``n_max``.

    ``a`` and ``b`` must be linear in t.
    """
    for name, x in (("a", a), ("b", b)):
        if any(key[2] != 1 for key in x.components):
            raise DomainError(f"sbch: every component of {name} must carry t^1")
    return _sbch_general(a, b, n_max)


def tdse_hamiltonian(potential: str = "V"):
    """The two exponents i t eps <1>_2 and -i t eps^-1 <V>_0."""
    a = ang(1, 2, scalar(1, i=1, t=1, eps=1))
    b = ang(potential, 0, scalar(-1, i=1, t=1, eps=-1))
    return a, b


# ---------------------------------------------------------------------------
# Zassenhaus


def min_sigma_order(x: FTerm, sigma) -> Fraction | None:
    orders = x.sigma_orders(sigma)
    return orders[0] if orders else None


@dataclass
class Splitting:
    """Palindromic product exp(W0/2)...exp(Wn/2) exp(W(n+1)) exp(Wn/2)...exp(W0/2)."""

    exponents: list
    sigma: Fraction
    n: int

    @property
    def order_target(self) -> Fraction:
        return (2 * self.n + 3) * self.sigma - 1

    def factors(self) -> list:
        """The exponents of the palindromic product, left to right."""
        half = [w.scale(Fraction(1, 2)) for w in self.exponents[:-1]]
        return half + [self.exponents[-1]] + half[::-1]

    def manifest(self) -> dict:
        """symbol -> derivative orders the numerical backend must sample."""
        orders = {}
        for w in self.exponents:
            for name, ds in w.derivative_orders().items():
                orders.setdefault(name, set()).update(ds)
        return {name: sorted(ds) for name, ds in sorted(orders.items())}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": format_rational(self.sigma),
            "order_target": format_rational(self.order_target),
            "manifest": self.manifest(),
            "exponents": [
                {
                    "index": idx,
                    "heights": w.heights(),
                    "sigma_order": None
                    if w.is_zero()
                    else format_rational(min_sigma_order(w, self.sigma)),
                    "formula": w.to_text("unicode"),
                    "terms": w.to_json(),
                }
                for idx, w in enumerate(self.exponents)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Splitting":
        data = json.loads(text)
        return cls(
            [FTerm.from_json(e["terms"]) for e in data["exponents"]],
            parse_rational(data["sigma"]),
            data["n"],
        )


def zassenhaus(a: FTerm, b: FTerm, n: int, sigma=Fraction(1, 2)) -> Splitting:
    """Peel a symmetric Zassenhaus splitting of exp(a + b).

    The running exponent starts at X0 = a + b and each stage conjugates out
    the outermost factor: X(k+1) = sbch(-W(k), X(k)).  W0 = a and W1 = b;
    for 2 <= k <= n the stage keeps every term of minimal sigma-order, and
    W(n+1) is whatever is left.  Series are cut at t-degree 2n+1 and terms
    of sigma-order above (2n+3)*sigma - 1 are discarded throughout.
    """
    sigma = Fraction(sigma)
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return Splitting([a, b], sigma, 0)
    n_max = 2 * n + 1
    target = (2 * n + 3) * sigma - 1

    def trim(x):
        return x.select(lambda key: sigma_order(key, sigma) <= target)

    exps = [a, b]
    x = trim(_sbch_general(-a, a + b, n_max))
    for k in range(1, n + 1):
        x = trim(_sbch_general(-exps[k], x, n_max))
        if k == n:
            exps.append(x)
            break
        low = min_sigma_order(x, sigma)
        w = x.select(lambda key, low=low: sigma_order(key, sigma) == low)
        exps.append(w)
    return Splitting(exps, sigma, n)


def recompose(split: Splitting, n_max: int | None = None) -> FTerm:
    """log of the palindromic product, as a truncated series."""
    n_max = n_max if n_max is not None else 2 * split.n + 1
    prod = ExpSeries(IDENTITY, n_max)
    for w in split.factors():
        prod = prod * exp_series(ExpSeries(w, n_max))
    return log_series(prod).term


def recomposition_residual(split: Splitting, a: FTerm, b: FTerm) -> FTerm:
    n_max = 2 * split.n + 1
    return recompose(split, n_max) - (a + b).truncate_t(n_max)


# ---------------------------------------------------------------------------
# Magnus


@dataclass
class MagnusTerm:
    coefficient: Fraction
    labels: tuple
    limits: str
    integrand: FTerm
    formula: str = field(default="")

    def weighted(self) -> FTerm:
        return self.integrand.scale(self.coefficient)


def magnus_generator(label: int) -> FTerm:
    """A(xi) = i t eps <1>_2 - i t eps^-1 <V(xi)>_0 with V(xi) named V<label>."""
    a, b = tdse_hamiltonian(f"V{label}")
    return a + b


def magnus_symbolic(depth: int) -> list:
    """The graded Magnus integrands of the given depth, commutator-free."""
    if depth < 1 or depth > 3:
        raise DomainError("magnus_symbolic supports depth 1..3")
    A = {j: magnus_generator(j) for j in (1, 2, 3)}
    if depth == 1:
        return [MagnusTerm(Fraction(1), (1,), "0<ξ1<t", A[1], "A(ξ1)")]
    if depth == 2:
        return [
            MagnusTerm(
                Fraction(-1, 2), (1, 2), "0<ξ2<ξ1<t", commutator(A[2], A[1]), "[A(ξ2),A(ξ1)]"
            )
        ]
    return [
        MagnusTerm(
            Fraction(1, 12),
            (1, 2, 3),
            "0<ξ2,ξ3<ξ1<t",
            commutator(A[2], commutator(A[3], A[1])),
            "[A(ξ2),[A(ξ3),A(ξ1)]]",
        ),
        MagnusTerm(
            Fraction(1, 4),
            (1, 2, 3),
            "0<ξ3<ξ2<ξ1<t",
            commutator(commutator(A[3], A[2]), A[1]),
            "[[A(ξ3),A(ξ2)],A(ξ1)]",
        ),
    ]


# ---------------------------------------------------------------------------
# cost


def _ceil_ratio(num: Fraction, den: Fraction) -> int:
    q = num / den
    return -((-q.numerator) // q.denominator)


def cost(n: int, sigma=Fraction(1)) -> int:
    """FFTs per step of the order-n symmetric Zassenhaus scheme."""
    sigma = Fraction(sigma)
    if n < 1:
        raise DomainError("cost needs n >= 1")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    top = (2 * n + 3) * sigma - 1
    dens = {k: (2 * k - 1) * sigma - 1 for k in range(2, n + 2)}
    bad = [k for k, d in dens.items() if d <= 0]
    if bad:
        raise DomainError(f"sigma={sigma} too small: (2k-1)sigma-1 <= 0 at k={bad[0]}")
    total = 4
    for k in range(2, n + 1):
        total += 2 * 4 * (k - 1) * _ceil_ratio(top, dens[k])
    total += 4 * n * _ceil_ratio(top, dens[n + 1])
    return total


def lanczos_iterations(n: int, k: int, sigma=Fraction(1)) -> int:
    """Default Krylov dimension for exponent W(k) of the order-n scheme."""
    sigma = Fraction(sigma)
    den = (2 * k - 1) * sigma - 1
    if den <= 0:
        raise DomainError(f"sigma={sigma} too small for exponent {k}")
    return _ceil_ratio((2 * n + 3) * sigma - 1, den)
