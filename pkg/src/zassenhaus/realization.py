"""Concrete realisations of the structure rules, used as exact oracles.

Two models are provided:

* block upper-triangular rational matrices, where ``d`` idealises a
  commutative subalgebra of 2n x 2n matrices;
* differential operators acting on a generic test function ``u``, where
  ``d = d/dx`` and the commutative algebra is multiplication operators.

In the matrix model every D-image is strictly block upper-triangular, so
products of two derivatives vanish there.  The operator model has no such
blind spot and is the one that can tell a wrong coefficient apart.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coefficients import lambda_coeff, pi_total
from .diffpoly import DiffPoly


def _rand_q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def _mat(rows) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = Fraction(v)
    return out


def _zeros(n: int) -> np.ndarray:
    return _mat([[0] * n for _ in range(n)])


def _eye(n: int) -> np.ndarray:
    return _mat([[int(i == j) for j in range(n)] for i in range(n)])


def _rand_block(n, rng):
    return _mat([[_rand_q(rng) for _ in range(n)] for _ in range(n)])


@dataclass
class BlockMatrixExample:
    """x = [[a I, A], [0, a I]] and d = [[E11, E12], [0, E22]] with n x n blocks."""

    n: int
    a: Fraction
    A: np.ndarray
    E11: np.ndarray
    E12: np.ndarray
    E22: np.ndarray

    @classmethod
    def from_lists(cls, a, A, E11, E12, E22) -> "BlockMatrixExample":
        A, E11, E12, E22 = (_mat(b) for b in (A, E11, E12, E22))
        return cls(A.shape[0], Fraction(a), A, E11, E12, E22)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "BlockMatrixExample":
        return cls(n, _rand_q(rng), *(_rand_block(n, rng) for _ in range(4)))

    def x(self) -> np.ndarray:
        return commutative_element(self.a, self.A)

    def d(self) -> np.ndarray:
        n = self.n
        return np.block([[self.E11, self.E12], [_zeros(n), self.E22]])


def commutative_element(a, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    return np.block([[_eye(n) * Fraction(a), A], [_zeros(n), _eye(n) * Fraction(a)]])


def in_commutative_algebra(m: np.ndarray) -> bool:
    """Shape [[a I, B], [0, a I]]?"""
    n = m.shape[0] // 2
    tl, tr = m[:n, :n], m[:n, n:]
    bl, br = m[n:, :n], m[n:, n:]
    a = tl[0, 0]
    return (
        all(v == 0 for v in bl.flat)
        and np.array_equal(tl, _eye(n) * a)
        and np.array_equal(br, _eye(n) * a)
        and tr.shape == (n, n)
    )


def _comm(p, q):
    return p.dot(q) - q.dot(p)


def _clear_denominators(m: np.ndarray) -> np.ndarray:
    """Integer matrix proportional to ``m``."""
    lcm = math.lcm(*(Fraction(v).denominator for v in m.flat))
    out = np.empty(m.shape, dtype=object)
    for idx, v in np.ndenumerate(m):
        out[idx] = int(Fraction(v) * lcm)
    return out


class _MatrixModel:
    """Integer arithmetic on 2<x>_k = x d^k + d^k x.

    Both structure rules are bilinear in (x, y) and homogeneous of degree
    k + l in d, so clearing denominators of x, y and d is harmless.
    """

    def __init__(self, d):
        self.d = d
        self._dpow = {0: np.identity(d.shape[0], dtype=int).astype(object)}
        self._derivs = {}

    def dpow(self, k):
        if k not in self._dpow:
            self._dpow[k] = self.dpow(k - 1).dot(self.d)
        return self._dpow[k]

    def derive(self, x, i, tag):
        key = (tag, i)
        if key not in self._derivs:
            self._derivs[key] = x if i == 0 else _comm(self.d, self.derive(x, i - 1, tag))
        return self._derivs[key]

    def ang2(self, x, k):
        dk = self.dpow(k)
        return x.dot(dk) + dk.dot(x)


@dataclass
class MatrixReport:
    ok: bool
    checks: int = 0
    failures: list = field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"ok ({self.checks} exact checks)"
        return f"FAILED {len(self.failures)}/{self.checks}: {self.failures[0]}"


def _expansion_holds(model, x, y, lhs4, terms):
    """lhs4 == sum c * 4<D^i x D^j y>_h over terms (c, i, j, h), exactly."""
    lcm = math.lcm(*(Fraction(2 * c).denominator for c, *_ in terms)) if terms else 1
    rhs = np.zeros(lhs4.shape, dtype=int).astype(object)
    for c, i, j, h in terms:
        z = model.derive(x, i, "x").dot(model.derive(y, j, "y"))
        rhs = rhs + model.ang2(z, h) * int(2 * c * lcm)
    return np.array_equal(lhs4 * lcm, rhs)


def _commutator_terms(k, l, lam):
    return [
        (lam(k, l, n, i), i, 2 * n + 1 - i, k + l - 2 * n - 1)
        for n in range((k + l - 1) // 2 + 1 if k + l else 0)
        for i in range(2 * n + 2)
        if lam(k, l, n, i)
    ]


def _product_terms(k, l, pi):
    return [
        (pi(k, l, n, i), i, n - i, k + l - n)
        for n in range(k + l + 1)
        for i in range(n + 1)
        if pi(k, l, n, i)
    ]


def matrix_example_verify(example: BlockMatrixExample | None, k: int, l: int,
                          trials: int = 20, seed: int = 0, n: int | None = None,
                          lam=lambda_coeff, pi=pi_total) -> MatrixReport:
    """Check [d, x] lies in the commutative algebra and both expansion rules, exactly.

    ``example`` fixes ``d`` (None draws a fresh random ``d`` per trial);
    ``x`` and ``y`` are random rational elements of the commutative algebra.
    """
    rng = random.Random(seed)
    size = example.n if example is not None else (n or 2)
    report = MatrixReport(True)
    comm_terms = _commutator_terms(k, l, lam)
    prod_terms = _product_terms(k, l, pi)
    for trial in range(trials):
        ex = example if example is not None else BlockMatrixExample.random(size, rng)
        d = ex.d()
        x = commutative_element(_rand_q(rng), _rand_block(size, rng))
        y = commutative_element(_rand_q(rng), _rand_block(size, rng))
        member = in_commutative_algebra(_comm(d, x))
        di, xi, yi = (_clear_denominators(m) for m in (d, x, y))
        model = _MatrixModel(di)
        X2, Y2 = model.ang2(xi, k), model.ang2(yi, l)
        results = {
            "[d,x] in C": member,
            "commutator rule": _expansion_holds(model, xi, yi, _comm(X2, Y2), comm_terms),
            "product rule": _expansion_holds(model, xi, yi, X2.dot(Y2), prod_terms),
        }
        for name, ok in results.items():
            report.checks += 1
            if not ok:
                report.ok = False
                report.failures.append(f"{name} (k={k}, l={l}, n={size}, trial {trial})")
    return report


# ---------------------------------------------------------------------------
# differential-operator model

_U = DiffPoly.symbol("u")


def ang_act(f: DiffPoly, k: int, u: DiffPoly) -> DiffPoly:
    """(f D^k u + D^k (f u)) / 2 for the derivation D = d/dx."""
    return (f * u.derive(k) + (f * u).derive(k)).scale(Fraction(1, 2))


def operator_product_check(k: int, l: int, pi=pi_total) -> bool:
    """<x>_k <y>_l == sum_n <z_n>_{k+l-n} as operators on a generic u."""
    x, y = DiffPoly.symbol("x"), DiffPoly.symbol("y")
    lhs = ang_act(x, k, ang_act(y, l, _U))
    rhs = DiffPoly()
    for n in range(k + l + 1):
        z = DiffPoly()
        for i in range(n + 1):
            c = pi(k, l, n, i)
            if c:
                z = z + (x.derive(i) * y.derive(n - i)).scale(c)
        rhs = rhs + ang_act(z, k + l - n, _U)
    return lhs == rhs


def operator_commutator_check(k: int, l: int, lam=lambda_coeff) -> bool:
    """[<x>_k, <y>_l] == sum lambda <D^i x D^(2n+1-i) y>_{k+l-2n-1} on a generic u."""
    x, y = DiffPoly.symbol("x"), DiffPoly.symbol("y")
    lhs = ang_act(x, k, ang_act(y, l, _U)) - ang_act(y, l, ang_act(x, k, _U))
    rhs = DiffPoly()
    for n in range((k + l - 1) // 2 + 1 if k + l else 0):
        z = DiffPoly()
        for i in range(2 * n + 2):
            c = lam(k, l, n, i)
            if c:
                z = z + (x.derive(i) * y.derive(2 * n + 1 - i)).scale(c)
        rhs = rhs + ang_act(z, k + l - 2 * n - 1, _U)
    return lhs == rhs


def with_override(func, key, value):
    """Coefficient function identical to ``func`` except at ``key``."""

    def wrapped(k, l, n, i):
        return Fraction(value) if (k, l, n, i) == key else func(k, l, n, i)

    return wrapped
