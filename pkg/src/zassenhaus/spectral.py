"""Fourier pseudospectral discretisation on [-1, 1) and the time steppers built on it."""

from __future__ import annotations

import csv
import io
import struct
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .diffpoly import DiffPoly
from .errors import ConfigurationError, DomainError, ShapeError
from .expr import DerivativeCache, Expr, evaluate, parse_expr
from .falgebra import FTerm
from .splitting import Splitting, lanczos_iterations

ORACLE_MAX_M = 512
DUMP_MAGIC = b"ZASS"


@dataclass(frozen=True)
class Grid:
    M: int

    def __post_init__(self):
        if self.M < 4 or self.M % 2:
            raise ShapeError(f"grid size must be even and >= 4, got {self.M}")

    @property
    def nodes(self) -> np.ndarray:
        return -1.0 + 2.0 * np.arange(self.M) / self.M

    @property
    def modes(self) -> np.ndarray:
        """Integer Fourier modes in FFT order; index M/2 holds -M/2 (Nyquist)."""
        return np.fft.fftfreq(self.M, d=1.0 / self.M)

    def symbol(self, k: int) -> np.ndarray:
        """Fourier multiplier (i pi m)^k; Nyquist zeroed for odd k."""
        s = (1j * np.pi * self.modes) ** k
        if k % 2:
            s[self.M // 2] = 0.0
        return s


@dataclass
class StateVector:
    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.M,):
            raise ShapeError(f"expected {self.grid.M} samples, got {self.values.shape}")

    def norm(self) -> float:
        return float(np.sqrt(2.0 / self.grid.M * np.vdot(self.values, self.values).real))

    def inner(self, other: "StateVector") -> complex:
        _same_grid(self.grid, other.grid)
        return complex(2.0 / self.grid.M * np.vdot(other.values, self.values))

    def copy(self) -> "StateVector":
        return StateVector(self.values.copy(), self.grid)


def _same_grid(g1: Grid, g2: Grid):
    if g1 != g2:
        raise ShapeError(f"grid mismatch: M={g1.M} vs M={g2.M}")


def gaussian_state(grid: Grid, center=-0.2, alpha=40.0, momentum=0.0, eps=1.0) -> StateVector:
    """exp(-alpha (x - center)^2 + i momentum x / eps), unit norm."""
    x = grid.nodes
    u = np.exp(-alpha * (x - center) ** 2 + 1j * momentum * x / eps)
    state = StateVector(u, grid)
    return StateVector(u / state.norm(), grid)


def diff_apply(u: StateVector, k: int) -> StateVector:
    if k < 0:
        raise DomainError("derivative order must be non-negative")
    if k == 0:
        return u.copy()
    return StateVector(np.fft.ifft(u.grid.symbol(k) * np.fft.fft(u.values)), u.grid)


@dataclass
class DiscreteAngOp:
    """scalar * (D_f K^k + K^k D_f) / 2 on a grid."""

    k: int
    f_samples: np.ndarray
    scalar: complex
    grid: Grid

    def apply(self, values: np.ndarray) -> np.ndarray:
        f = self.f_samples
        if self.k == 0:
            return self.scalar * f * values
        sym = self.grid.symbol(self.k)
        ku = np.fft.ifft(sym * np.fft.fft(values))
        kfu = np.fft.ifft(sym * np.fft.fft(f * values))
        return self.scalar * 0.5 * (f * ku + kfu)


def ang_apply(op: DiscreteAngOp, u: StateVector) -> StateVector:
    _same_grid(op.grid, u.grid)
    return StateVector(op.apply(u.values), u.grid)


def apply_sum(ops, values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values, dtype=complex)
    for op in ops:
        out += op.apply(values)
    return out


# ---------------------------------------------------------------------------
# symbolic -> numeric


class Binding:
    """Maps symbol names to closed-form functions, sampling derivatives lazily."""

    def __init__(self, grid: Grid, exprs: dict):
        self.grid = grid
        self._caches = {
            name: DerivativeCache(parse_expr(e) if isinstance(e, str) else e)
            for name, e in exprs.items()
        }
        self._samples = {}

    def names(self) -> set:
        return set(self._caches)

    def sample(self, name: str, order: int) -> np.ndarray:
        key = (name, order)
        if key not in self._samples:
            if name not in self._caches:
                raise ConfigurationError(f"no function bound to symbol {name!r}")
            self._samples[key] = evaluate(self._caches[name][order], self.grid.nodes)
        return self._samples[key]

    def poly(self, p: DiffPoly) -> np.ndarray:
        out = np.zeros(self.grid.M)
        for m, c in p.terms.items():
            term = np.full(self.grid.M, float(c))
            for name, order, e in m:
                term = term * self.sample(name, order) ** e
            out += term
        return out

    def check_manifest(self, manifest: dict):
        missing = sorted(set(manifest) - self.names())
        if missing:
            raise ConfigurationError(f"derivative manifest needs unbound symbols {missing}")


def discretize(term: FTerm, binding: Binding, t: float, eps: float) -> list:
    """One DiscreteAngOp per component of ``term`` at concrete t and eps."""
    binding.check_manifest(term.derivative_orders())
    ops = []
    for (k, ipow, tpow, epow), poly in term.sorted_items():
        sc = (1j if ipow else 1.0) * t**tpow * eps**epow
        ops.append(DiscreteAngOp(k, binding.poly(poly), sc, binding.grid))
    return ops


# ---------------------------------------------------------------------------
# dense oracle


def _check_oracle_size(grid: Grid):
    if grid.M > ORACLE_MAX_M:
        raise ConfigurationError(f"dense oracle refuses M={grid.M} > {ORACLE_MAX_M}")


def circulant_power(grid: Grid, k: int) -> np.ndarray:
    """Dense real K^k, exactly symmetric (k even) or skew-symmetric (k odd)."""
    _check_oracle_size(grid)
    col = np.fft.ifft(grid.symbol(k)).real
    idx = (np.arange(grid.M)[:, None] - np.arange(grid.M)[None, :]) % grid.M
    c = col[idx]
    return 0.5 * (c - c.T) if k % 2 else 0.5 * (c + c.T)


def dense_assemble(ops) -> np.ndarray:
    """Dense matrix of a sum of DiscreteAngOps."""
    ops = list(ops)
    if not ops:
        raise ShapeError("empty operator set")
    grid = ops[0].grid
    _check_oracle_size(grid)
    H = np.zeros((grid.M, grid.M), dtype=complex)
    powers = {}
    for op in ops:
        _same_grid(grid, op.grid)
        if op.k == 0:
            H[np.diag_indices(grid.M)] += op.scalar * op.f_samples
            continue
        if op.k not in powers:
            powers[op.k] = circulant_power(grid, op.k)
        c = powers[op.k]
        f = op.f_samples
        H += op.scalar * (0.5 * (f[:, None] * c + c * f[None, :]))
    return H


def dense_expm(H: np.ndarray, dt: float = 1.0) -> np.ndarray:
    if H.shape[0] > ORACLE_MAX_M:
        raise ConfigurationError(f"dense oracle refuses M={H.shape[0]} > {ORACLE_MAX_M}")
    return scipy.linalg.expm(dt * H)


# ---------------------------------------------------------------------------
# Lanczos


def adjoint_defect(apply, M: int, rng=None) -> float:
    """Relative size of <Hu,v> + <u,Hv> for random u, v."""
    rng = rng or np.random.default_rng(0)
    u = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    v = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    hu, hv = apply(u), apply(v)
    scale = max(np.linalg.norm(hu) * np.linalg.norm(v), np.linalg.norm(hv) * np.linalg.norm(u), 1e-300)
    return abs(np.vdot(v, hu) + np.vdot(hv, u)) / scale


def lanczos_expmv(ops, u: StateVector, iters: int, check: bool = True) -> StateVector:
    """Krylov approximation of exp(H) u for skew-Hermitian H = sum(ops).

    ``ops`` is a list of DiscreteAngOps or any callable on sample arrays.
    Runs Lanczos on the Hermitian matrix -iH with full reorthogonalisation.
    """
    if iters < 1:
        raise DomainError("iters must be >= 1")
    apply = ops if callable(ops) else (lambda v: apply_sum(ops, v))
    M = u.grid.M
    if check and adjoint_defect(apply, M) > 1e-10:
        raise DomainError("operator is not skew-Hermitian")
    beta0 = np.linalg.norm(u.values)
    if beta0 == 0:
        return u.copy()
    iters = min(iters, M)
    Q = np.zeros((M, iters), dtype=complex)
    alpha = np.zeros(iters)
    beta = np.zeros(iters)
    Q[:, 0] = u.values / beta0
    m = iters
    for j in range(iters):
        w = -1j * apply(Q[:, j])
        alpha[j] = np.vdot(Q[:, j], w).real
        w = w - Q[:, : j + 1] @ (Q[:, : j + 1].conj().T @ w)
        w = w - Q[:, : j + 1] @ (Q[:, : j + 1].conj().T @ w)
        if j + 1 == iters:
            break
        b = np.linalg.norm(w)
        scale = max(abs(alpha[j]), beta[j - 1] if j else 0.0, 1.0)
        if b <= 1e-13 * scale:
            m = j + 1
            break
        beta[j] = b
        Q[:, j + 1] = w / b
    T = np.diag(alpha[:m]) + np.diag(beta[: m - 1], 1) + np.diag(beta[: m - 1], -1)
    evals, evecs = np.linalg.eigh(T)
    coeffs = evecs @ (np.exp(1j * evals) * evecs[0, :].conj())
    return StateVector(beta0 * (Q[:, :m] @ coeffs), u.grid)


# ---------------------------------------------------------------------------
# steppers


def _potential_samples(V, grid: Grid) -> np.ndarray:
    expr = parse_expr(V) if isinstance(V, str) else V
    return evaluate(expr, grid.nodes)


def step_strang(u: StateVector, V, eps: float, dt: float, _vs=None) -> StateVector:
    """exp(dt/2 i eps K^2) exp(-i dt/eps D_V) exp(dt/2 i eps K^2) u."""
    grid = u.grid
    half = np.exp(0.5 * dt * eps * 1j * grid.symbol(2))
    vs = _vs if _vs is not None else _potential_samples(V, grid)
    w = np.fft.ifft(half * np.fft.fft(u.values))
    w = np.exp(-1j * dt / eps * vs) * w
    return StateVector(np.fft.ifft(half * np.fft.fft(w)), grid)


@dataclass
class _Factor:
    kind: str  # "fourier", "pointwise" or "lanczos"
    data: object
    iters: int = 0

    def apply(self, values: np.ndarray, grid: Grid) -> np.ndarray:
        if self.kind == "fourier":
            return np.fft.ifft(self.data * np.fft.fft(values))
        if self.kind == "pointwise":
            return self.data * values
        return lanczos_expmv(self.data, StateVector(values, grid), self.iters, check=False).values


class ZassenhausStepper:
    """Precomputed factors of a splitting at fixed (grid, V, eps, dt)."""

    def __init__(self, splitting: Splitting, V, eps: float, dt: float, grid: Grid,
                 symbol: str = "V", lanczos_iters: int | None = None):
        self.grid = grid
        expr = parse_expr(V) if isinstance(V, str) else V
        binding = Binding(grid, {symbol: expr})
        manifest = splitting.manifest()
        binding.check_manifest(manifest)
        self.factors = []
        count = len(splitting.exponents)
        weights = [Fraction(1, 2)] * (count - 1) + [Fraction(1)] + [Fraction(1, 2)] * (count - 1)
        order = list(range(count)) + list(range(count - 2, -1, -1))
        cache = {}
        for idx, weight in zip(order, weights):
            key = (idx, weight)
            if key not in cache:
                w = splitting.exponents[idx].scale(weight)
                cache[key] = self._factor(w, idx, splitting, binding, eps, dt, lanczos_iters)
            self.factors.append(cache[key])

    def _factor(self, w: FTerm, idx, splitting, binding, eps, dt, lanczos_iters):
        ops = discretize(w, binding, dt, eps)
        grid = self.grid
        if all(op.k == 0 for op in ops):
            total = sum((op.scalar * op.f_samples for op in ops), np.zeros(grid.M, dtype=complex))
            return _Factor("pointwise", np.exp(total))
        if all(np.ptp(op.f_samples) == 0 for op in ops):
            # constant coefficients: diagonal in Fourier space
            total = sum(
                (op.scalar * op.f_samples[0] * grid.symbol(op.k) for op in ops),
                np.zeros(grid.M, dtype=complex),
            )
            return _Factor("fourier", np.exp(total))
        if adjoint_defect(lambda v: apply_sum(ops, v), grid.M) > 1e-10:
            raise DomainError(f"exponent {idx} does not discretise to a skew-Hermitian matrix")
        if lanczos_iters is None:
            iters = lanczos_iterations(max(splitting.n, 1), max(idx, 2), splitting.sigma)
        else:
            iters = lanczos_iters
        return _Factor("lanczos", ops, iters)

    def step(self, u: StateVector) -> StateVector:
        _same_grid(self.grid, u.grid)
        v = u.values
        for f in self.factors:
            v = f.apply(v, self.grid)
        return StateVector(v, self.grid)


def step_zassenhaus(u: StateVector, splitting: Splitting, V, eps: float, dt: float,
                    lanczos_iters: int | None = None) -> StateVector:
    return ZassenhausStepper(splitting, V, eps, dt, u.grid, lanczos_iters=lanczos_iters).step(u)


def tdse_dense(grid: Grid, V, eps: float) -> np.ndarray:
    """Dense i eps K^2 - i/eps D_V."""
    vs = _potential_samples(V, grid)
    ops = [
        DiscreteAngOp(2, np.ones(grid.M), 1j * eps, grid),
        DiscreteAngOp(0, vs, -1j / eps, grid),
    ]
    return dense_assemble(ops)


# ---------------------------------------------------------------------------
# runs and I/O


@dataclass
class ErrorRow:
    M: int
    eps: float
    dt: float
    steps: int
    scheme: str
    error_l2: float
    norm_drift: float
    wall_ms: float


CSV_COLUMNS = [f for f in ErrorRow.__dataclass_fields__]


def integrate(u0: StateVector, scheme: str, V, eps: float, dt: float, steps: int,
              splitting: Splitting | None = None, lanczos_iters: int | None = None):
    """Run ``steps`` steps; returns (final state, max per-step norm change)."""
    grid = u0.grid
    if scheme == "strang":
        vs = _potential_samples(V, grid)
        stepper = lambda u: step_strang(u, V, eps, dt, _vs=vs)  # noqa: E731
    elif scheme == "zassenhaus":
        if splitting is None:
            raise ConfigurationError("zassenhaus scheme needs a splitting")
        stepper = ZassenhausStepper(splitting, V, eps, dt, grid, lanczos_iters=lanczos_iters).step
    else:
        raise ConfigurationError(f"unknown scheme {scheme!r}")
    u = u0
    worst = 0.0
    for _ in range(steps):
        v = stepper(u)
        worst = max(worst, abs(v.norm() - u.norm()))
        u = v
    return u, worst


def solve(M: int, eps: float, dt: float, steps: int, V, scheme: str,
          splitting: Splitting | None = None, u0: StateVector | None = None,
          lanczos_iters: int | None = None, reference: bool = True):
    """Integrate and compare against the dense oracle; returns (ErrorRow, final state)."""
    grid = Grid(M)
    u0 = u0 if u0 is not None else gaussian_state(grid)
    start = time.perf_counter()
    u, _ = integrate(u0, scheme, V, eps, dt, steps, splitting, lanczos_iters)
    wall = 1000.0 * (time.perf_counter() - start)
    err = float("nan")
    if reference and M <= ORACLE_MAX_M:
        exact = dense_expm(tdse_dense(grid, V, eps), dt * steps) @ u0.values
        err = StateVector(u.values - exact, grid).norm()
    row = ErrorRow(M, eps, dt, steps, scheme, err, abs(u.norm() - u0.norm()), wall)
    return row, u


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        d = asdict(row)
        for key in ("eps", "dt", "error_l2", "norm_drift"):
            d[key] = repr(float(d[key]))
        d["wall_ms"] = f"{d['wall_ms']:.3f}"
        writer.writerow(d)
    return buf.getvalue()


def dump_state(u: StateVector) -> bytes:
    """16-byte header (magic, M, two reserved words) then interleaved re/im."""
    header = DUMP_MAGIC + struct.pack("<III", u.grid.M, 0, 0)
    body = np.empty(2 * u.grid.M, dtype="<f8")
    body[0::2] = u.values.real
    body[1::2] = u.values.imag
    return header + body.tobytes()


def load_state(data: bytes) -> StateVector:
    if data[:4] != DUMP_MAGIC:
        raise ShapeError("not a state dump (bad magic)")
    (M, _, _) = struct.unpack("<III", data[4:16])
    body = np.frombuffer(data[16:], dtype="<f8")
    if body.size != 2 * M:
        raise ShapeError(f"dump holds {body.size // 2} samples, header says {M}")
    return StateVector(body[0::2] + 1j * body[1::2], Grid(M))


def spectral_radius(H: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(H))))


__all__ = [
    "Binding", "DiscreteAngOp", "ErrorRow", "Grid", "StateVector", "ZassenhausStepper",
    "ang_apply", "circulant_power", "dense_assemble", "dense_expm", "diff_apply",
    "discretize", "dump_state", "gaussian_state", "integrate", "lanczos_expmv", "load_state",
    "rows_to_csv", "solve", "spectral_radius", "step_strang", "step_zassenhaus", "tdse_dense",
]
