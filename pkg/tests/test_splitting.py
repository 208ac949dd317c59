import random
from fractions import Fraction as F

import pytest

from zassenhaus.diffpoly import DiffPoly
from zassenhaus.errors import DomainError
from zassenhaus.falgebra import (
    FTerm, Parity, ang, assoc_mul, commutator, height, parity, scalar, skew_hermitian_check,
)
from zassenhaus.splitting import (
    IDENTITY, ExpSeries, Splitting, cost, exp_series, lanczos_iterations, log_series,
    magnus_symbolic, min_sigma_order, recomposition_residual, sbch, tdse_hamiltonian, zassenhaus,
)
from zassenhaus.verify import random_term

V = DiffPoly.symbol("V")
A, B = tdse_hamiltonian()

# the t^3 block of the TDSE sBCH exponent, with the factor i on the (DV)^2 term
T3 = (
    ang(V.derive(2), 2, scalar(F(-1, 6), i=1, t=3, eps=1))
    + ang(V.derive(4), 0, scalar(F(1, 24), i=1, t=3, eps=1))
    + ang(V.derive() * V.derive(), 0, scalar(F(-1, 6), i=1, t=3, eps=-1))
)


def t_linear(rng, h=2):
    return random_term(rng, h).scale(scalar(1, t=1))


def test_exp_series_definition():
    a = ang(DiffPoly.symbol("x"), 1, scalar(1, t=1))
    e = exp_series(ExpSeries(a, 2))
    assert e.term == IDENTITY + a + assoc_mul(a, a).scale(F(1, 2))
    assert set(e.terms) == {0, 1, 2}


def test_exp_log_inverse_pair():
    rng = random.Random(5)
    for N in (2, 4, 6):
        a = t_linear(rng, 1)
        s = ExpSeries(a, N)
        assert log_series(exp_series(s)).term == a
        prod = exp_series(s) * exp_series(s.scale(-1))
        assert prod.term == IDENTITY


def test_exp_log_preconditions():
    with pytest.raises(DomainError):
        exp_series(ExpSeries(ang(1, 1), 3))
    with pytest.raises(DomainError):
        log_series(ExpSeries(ang(1, 1, scalar(1, t=1)), 3))


def test_sbch_degree_three_formula():
    rng = random.Random(11)
    for _ in range(4):
        a, b = t_linear(rng), t_linear(rng)
        expected = a + b - (
            commutator(commutator(b, a), a).scale(F(1, 24)) + commutator(commutator(b, a), b).scale(F(1, 12))
        )
        assert sbch(a, b, 3) == expected


def test_sbch_tdse():
    assert sbch(A, B, 4) == A + B + T3


def test_sbch_with_empty_b():
    assert sbch(A, FTerm.zero(), 5) == A


def test_sbch_requires_linear_t():
    with pytest.raises(DomainError):
        sbch(ang(1, 2), B, 3)


@pytest.mark.parametrize("N", [3, 5, 7])
def test_sbch_odd_degrees_only(N):
    rng = random.Random(N)
    a, b = t_linear(rng, 1), t_linear(rng, 1)
    assert all(d % 2 == 1 for d in sbch(a, b, N).t_degrees())


def test_sbch_tdse_stays_skew_hermitian():
    out = sbch(A, B, 5)
    assert 5 in out.t_degrees()
    assert skew_hermitian_check(out)


def test_zassenhaus_n0():
    split = zassenhaus(A, B, 0)
    assert split.exponents == [A, B]


def test_zassenhaus_n1_sigma1_is_minus_t3_block():
    split = zassenhaus(A, B, 1, F(1))
    assert split.exponents[:2] == [A, B]
    assert split.exponents[2] == -T3


def test_zassenhaus_rejects_bad_sigma():
    with pytest.raises(DomainError):
        zassenhaus(A, B, 1, 0)
    with pytest.raises(DomainError):
        zassenhaus(A, B, 1, F(-1, 2))


@pytest.mark.parametrize("sigma", [F(1, 2), F(1)])
@pytest.mark.parametrize("n", [1, 2])
def test_zassenhaus_structure(n, sigma):
    split = zassenhaus(A, B, n, sigma)
    assert len(split.exponents) == n + 2
    for k, w in enumerate(split.exponents):
        assert skew_hermitian_check(w)
        if k >= 2:
            assert parity(w) is Parity.EVEN
            assert height(w) <= 2 * k - 2
        if k >= 1:
            assert min_sigma_order(w, sigma) == (2 * k - 1) * sigma - 1
    residual = recomposition_residual(split, A, B)
    assert all(o > split.order_target for o in residual.sigma_orders(sigma))


def test_splitting_json_roundtrip():
    split = zassenhaus(A, B, 2, F(1, 2))
    back = Splitting.from_json(split.to_json())
    assert back.exponents == split.exponents
    assert back.sigma == split.sigma and back.n == split.n
    assert split.manifest() == {"V": [0, 1, 2, 3, 4]} or "V" in split.manifest()


def test_manifest_n1():
    assert zassenhaus(A, B, 1, F(1)).manifest() == {"V": [0, 1, 2, 4]}


def test_magnus_depths():
    (m1,) = magnus_symbolic(1)
    assert m1.coefficient == 1
    assert m1.integrand == A.substitute({"V": "V1"}) + B.substitute({"V": "V1"})
    (m2,) = magnus_symbolic(2)
    assert m2.coefficient == F(-1, 2)
    v1, v2 = DiffPoly.symbol("V1"), DiffPoly.symbol("V2")
    # [A(2), A(1)] = (i t eps)(-i t / eps) ([<1>_2, <V1>_0] - [<1>_2, <V2>_0])
    assert m2.integrand == ang((v1.derive() - v2.derive()).scale(2), 1, scalar(1, t=2))
    third = magnus_symbolic(3)
    assert [m.coefficient for m in third] == [F(1, 12), F(1, 4)]
    for m in third:
        assert skew_hermitian_check(m.integrand)
        assert height(m.integrand) <= 2 * 3 - 3 + 1


def test_magnus_depth_limit():
    with pytest.raises(DomainError):
        magnus_symbolic(4)


def test_cost_values():
    assert cost(1, 1) == 12
    assert cost(2, 1) == 44
    for n in range(1, 51):
        assert cost(n, 1) <= 12 * n * n + 4 * n - 4
    for n in range(5, 51):
        assert 8 <= cost(n, 1) / n**2 <= 13


def test_cost_domain():
    with pytest.raises(DomainError):
        cost(1, F(1, 4))
    with pytest.raises(DomainError):
        cost(0, 1)
    assert cost(3, F(1, 2)) > cost(3, 1)


def test_lanczos_iterations_rule():
    assert lanczos_iterations(1, 2, 1) == 2
    assert lanczos_iterations(2, 3, 1) == 2
    assert lanczos_iterations(2, 2, F(1, 2)) == 5
