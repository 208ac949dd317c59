from fractions import Fraction as F

import numpy as np
import pytest

from zassenhaus.errors import ConfigurationError, DomainError, ShapeError
from zassenhaus.splitting import tdse_hamiltonian, zassenhaus
from zassenhaus.spectral import (
    CSV_COLUMNS, Binding, DiscreteAngOp, Grid, StateVector, ZassenhausStepper, ang_apply,
    circulant_power, dense_assemble, dense_expm, diff_apply, discretize, dump_state,
    gaussian_state, integrate, lanczos_expmv, load_state, rows_to_csv, solve, step_strang,
    tdse_dense,
)

V = "cos(pi*x)"
EPS = 1 / 16


@pytest.fixture
def grid():
    return Grid(64)


def test_grid_validation():
    with pytest.raises(ShapeError):
        Grid(7)
    with pytest.raises(ShapeError):
        StateVector(np.zeros(5), Grid(8))


def test_diff_apply_trig(grid):
    x = grid.nodes
    u = StateVector(np.sin(3 * np.pi * x), grid)
    assert np.allclose(diff_apply(u, 1).values, 3 * np.pi * np.cos(3 * np.pi * x), atol=1e-9)
    assert np.allclose(diff_apply(u, 2).values, -(3 * np.pi) ** 2 * u.values, atol=1e-8)
    assert np.allclose(diff_apply(u, 0).values, u.values)
    with pytest.raises(DomainError):
        diff_apply(u, -1)


def test_ang_apply_matches_definition(grid):
    x = grid.nodes
    f = np.cos(np.pi * x)
    u = StateVector(np.exp(np.sin(np.pi * x)), grid)
    op = DiscreteAngOp(1, f, 1.0, grid)
    expected = 0.5 * (f * diff_apply(u, 1).values + diff_apply(StateVector(f * u.values, grid), 1).values)
    assert np.allclose(ang_apply(op, u).values, expected)
    with pytest.raises(ShapeError):
        ang_apply(op, StateVector(np.ones(32), Grid(32)))


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_dense_assembly_symmetry(grid, k):
    f = 1.0 + 0.3 * np.sin(np.pi * grid.nodes)
    H = dense_assemble([DiscreteAngOp(k, f, 1.0, grid)])
    sign = -1 if k % 2 else 1
    assert np.array_equal(H, sign * H.T)
    Hi = dense_assemble([DiscreteAngOp(k, f, 1j ** (k + 1), grid)])
    assert np.max(np.abs(Hi + Hi.conj().T)) == 0.0


def test_dense_matches_matrix_free(grid):
    rng = np.random.default_rng(1)
    f = np.exp(np.cos(np.pi * grid.nodes))
    for k in range(5):
        op = DiscreteAngOp(k, f, 1j, grid)
        u = rng.standard_normal(grid.M) + 1j * rng.standard_normal(grid.M)
        assert np.allclose(dense_assemble([op]) @ u, op.apply(u), atol=1e-8 * (grid.M ** k))


def test_circulant_power_oracle_limit():
    with pytest.raises(ConfigurationError):
        circulant_power(Grid(1024), 2)
    with pytest.raises(ConfigurationError):
        dense_expm(np.zeros((600, 600)))


def test_dense_expm_inverse_pair(grid):
    H = tdse_dense(grid, V, EPS)
    prod = dense_expm(H, 0.1) @ dense_expm(H, -0.1)
    assert np.allclose(prod, np.eye(grid.M), atol=1e-10)


def test_lanczos_full_krylov_matches_dense(grid):
    H = tdse_dense(grid, V, EPS) * 0.05
    u = gaussian_state(grid)
    approx = lanczos_expmv(lambda v: H @ v, u, grid.M)
    exact = dense_expm(H) @ u.values
    assert np.max(np.abs(approx.values - exact)) < 1e-10


def test_lanczos_edge_cases(grid):
    u = gaussian_state(grid)
    same = lanczos_expmv(lambda v: np.zeros_like(v), u, 5)
    assert np.allclose(same.values, u.values)
    zero = StateVector(np.zeros(grid.M), grid)
    assert np.all(lanczos_expmv(lambda v: v, zero, 3, check=False).values == 0)
    with pytest.raises(DomainError):
        lanczos_expmv(lambda v: v, u, 3)
    with pytest.raises(DomainError):
        lanczos_expmv(lambda v: 1j * v, u, 0)


def test_lanczos_preserves_norm(grid):
    H = tdse_dense(grid, V, EPS) * 0.01
    u = gaussian_state(grid)
    for iters in (2, 4, 8):
        assert abs(lanczos_expmv(lambda v: H @ v, u, iters).norm() - 1.0) < 1e-12


def test_strang_limits(grid):
    u = gaussian_state(grid)
    assert np.allclose(step_strang(u, V, EPS, 0.0).values, u.values)
    v = u
    for _ in range(100):
        v = step_strang(v, V, EPS, 0.01)
    assert abs(v.norm() - 1.0) < 1e-12


def test_zassenhaus_norm_100_steps(grid):
    split = zassenhaus(*tdse_hamiltonian(), 1, F(1))
    u, worst = integrate(gaussian_state(grid), "zassenhaus", V, EPS, 0.01, 100, split)
    assert abs(u.norm() - 1.0) < 1e-12
    assert worst < 1e-13


def _dense_factor_product(split, grid, dt):
    binding = Binding(grid, {"V": V})
    count = len(split.exponents)
    seq = [(i, F(1, 2)) for i in range(count - 1)] + [(count - 1, F(1))]
    seq += [(i, F(1, 2)) for i in range(count - 2, -1, -1)]
    total = np.eye(grid.M, dtype=complex)
    for idx, weight in seq:
        H = dense_assemble(discretize(split.exponents[idx].scale(weight), binding, dt, EPS))
        total = dense_expm(H) @ total
    return total


@pytest.mark.parametrize("n,sigma", [(1, F(1)), (2, F(1, 2))])
def test_one_step_against_dense_factors(grid, n, sigma):
    split = zassenhaus(*tdse_hamiltonian(), n, sigma)
    dt = 0.01
    u = gaussian_state(grid)
    stepped = ZassenhausStepper(split, V, EPS, dt, grid, lanczos_iters=grid.M).step(u)
    exact = _dense_factor_product(split, grid, dt) @ u.values
    assert np.max(np.abs(stepped.values - exact)) < 1e-10


def test_strang_against_dense_factors(grid):
    dt = 0.01
    u = gaussian_state(grid)
    vs = np.cos(np.pi * grid.nodes)
    A = dense_assemble([DiscreteAngOp(2, np.ones(grid.M), 1j * EPS, grid)])
    B = dense_assemble([DiscreteAngOp(0, vs, -1j / EPS, grid)])
    exact = dense_expm(A, dt / 2) @ dense_expm(B, dt) @ dense_expm(A, dt / 2) @ u.values
    assert np.max(np.abs(step_strang(u, V, EPS, dt).values - exact)) < 1e-10


def test_manifest_mismatch(grid):
    split = zassenhaus(*tdse_hamiltonian("W"), 1, F(1))
    with pytest.raises(ConfigurationError):
        ZassenhausStepper(split, V, EPS, 0.01, grid)


def test_solve_refuses_large_oracle_gracefully():
    row, _ = solve(1024, EPS, 0.01, 1, V, "strang")
    assert np.isnan(row.error_l2)
    with pytest.raises(ConfigurationError):
        tdse_dense(Grid(1024), V, EPS)


def test_solve_rejects_unknown_scheme():
    with pytest.raises(ConfigurationError):
        solve(32, EPS, 0.01, 1, V, "leapfrog")
    with pytest.raises(ConfigurationError):
        solve(32, EPS, 0.01, 1, V, "zassenhaus")


def test_dump_roundtrip(grid):
    u = gaussian_state(grid, momentum=2.0, eps=EPS)
    data = dump_state(u)
    assert len(data) == 16 + 16 * grid.M
    back = load_state(data)
    assert back.grid == grid and np.array_equal(back.values, u.values)
    with pytest.raises(ShapeError):
        load_state(b"XXXX" + data[4:])
    with pytest.raises(ShapeError):
        load_state(data[:-8])


def test_csv_columns():
    row, _ = solve(32, EPS, 0.01, 2, V, "strang")
    lines = rows_to_csv([row]).splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    assert CSV_COLUMNS == ["M", "eps", "dt", "steps", "scheme", "error_l2", "norm_drift", "wall_ms"]
    assert len(lines) == 2
