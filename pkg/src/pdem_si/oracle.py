"""Independent verification engine: symmetric tridiagonal discretizations,
Sturm-sequence bisection eigenvalues, inverse-iteration eigenvectors, Simpson
quadrature.

Both discretizations use midpoint (staggered) coefficients so the matrices are
exactly symmetric; boundary nodes carry Dirichlet conditions and are excluded
from the matrix.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import (
    ConvergenceError,
    DeformingFunction,
    Grid,
    NonPositiveError,
    ParameterError,
    SingularPotential,
    deforming_eval,
)

_V_GUARD = 1e14
_PIVMIN = 1e-290


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal operator over the interior nodes of ``grid``.

    ``left_coupling``/``right_coupling`` hold the stencil weights to the two
    boundary nodes; the eigenproblem (Dirichlet) never uses them, but applying
    the operator to samples that do not vanish at the boundary does.
    """

    diag: np.ndarray
    off: np.ndarray
    grid: Grid
    left_coupling: float = 0.0
    right_coupling: float = 0.0

    def __post_init__(self):
        if len(self.diag) != self.grid.n_points - 2 or len(self.off) != len(self.diag) - 1:
            raise ParameterError("tridiagonal operator shape mismatch with grid")

    @property
    def n(self) -> int:
        return len(self.diag)

    def apply_interior(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def apply(self, psi_full: np.ndarray) -> np.ndarray:
        """Full sampled action at interior nodes, boundary couplings included."""
        psi = np.asarray(psi_full, dtype=float)
        out = self.apply_interior(psi[1:-1])
        out[0] += self.left_coupling * psi[0]
        out[-1] += self.right_coupling * psi[-1]
        return out

    def gershgorin(self) -> tuple:
        radius = np.zeros(self.n)
        radius[:-1] += np.abs(self.off)
        radius[1:] += np.abs(self.off)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray]  # rows on the full grid, Simpson-normalized
    grid_meta: dict


def discretize_deformed(df: DeformingFunction, v_eff: Callable, grid: Grid) -> TridiagonalOperator:
    """H = S T_f S + diag(V_eff), S = diag(sqrt f), T_f the symmetric flux form."""
    x = grid.nodes()
    h = grid.spacing
    xi = x[1:-1]
    f = np.asarray(deforming_eval(df, xi).f, dtype=float)
    fm = np.asarray(deforming_eval(df, grid.midpoints()).f, dtype=float)
    if np.any(f <= 0.0) or np.any(fm <= 0.0):
        raise NonPositiveError("deforming function must be positive on the grid")
    V = np.asarray(v_eff(xi), dtype=float)
    if np.any(~np.isfinite(V)) or np.any(np.abs(V) > _V_GUARD):
        raise SingularPotential("potential exceeds overflow guard at an interior node")
    s = np.sqrt(f)
    diag = f * (fm[1:] + fm[:-1]) / h**2 + V
    off = -s[:-1] * fm[1:-1] * s[1:] / h**2
    sb = np.sqrt(np.asarray(deforming_eval(df, x[[0, -1]]).f, dtype=float))
    return TridiagonalOperator(
        diag,
        off,
        grid,
        left_coupling=float(-s[0] * fm[0] * sb[0] / h**2),
        right_coupling=float(-s[-1] * fm[-1] * sb[1] / h**2),
    )


def discretize_vonroos(m_field: Callable, amb_primed: tuple, v: Callable, grid: Grid) -> TridiagonalOperator:
    """Symmetric discretization of the mass-power ordered kinetic term plus diag(V)."""
    xi_p, eta_p, zeta_p = amb_primed
    if abs(xi_p + eta_p + zeta_p + 1.0) > 1e-12:
        raise ParameterError("primed exponents must sum to -1")
    x = grid.nodes()
    h = grid.spacing
    xin = x[1:-1]
    M = np.asarray(m_field(xin), dtype=float)
    Mm = np.asarray(m_field(grid.midpoints()), dtype=float)
    if np.any(M <= 0.0) or np.any(Mm <= 0.0):
        raise NonPositiveError("mass field must be positive on the grid")
    V = np.asarray(v(xin), dtype=float)
    if np.any(~np.isfinite(V)) or np.any(np.abs(V) > _V_GUARD):
        raise SingularPotential("potential exceeds overflow guard at an interior node")
    A = M**xi_p
    B = Mm**eta_p
    C = M**zeta_p
    diag = A * C * (B[1:] + B[:-1]) / h**2 + V
    off = -0.5 * B[1:-1] * (A[:-1] * C[1:] + C[:-1] * A[1:]) / h**2
    Mb = np.asarray(m_field(x[[0, -1]]), dtype=float)
    Ab, Cb = Mb**xi_p, Mb**zeta_p
    left = -0.5 * B[0] * (A[0] * Cb[0] + C[0] * Ab[0]) / h**2
    right = -0.5 * B[-1] * (A[-1] * Cb[1] + C[-1] * Ab[1]) / h**2
    return TridiagonalOperator(diag, off, grid, left_coupling=float(left), right_coupling=float(right))


def sturm_count(op: TridiagonalOperator, t: float) -> int:
    """Number of eigenvalues of ``op`` strictly below t (LDL^T sign count)."""
    return _count(list(map(float, op.diag)), [float(e) ** 2 for e in op.off], float(t))


def _count(d: list, e2: list, t: float) -> int:
    # zero pivots are replaced by -pivmin before the sign test (ties count below)
    cnt = 0
    q = d[0] - t
    if -_PIVMIN < q < _PIVMIN:
        q = -_PIVMIN
    if q < 0.0:
        cnt = 1
    for j in range(1, len(d)):
        q = d[j] - t - e2[j - 1] / q
        if -_PIVMIN < q < _PIVMIN:
            q = -_PIVMIN
        if q < 0.0:
            cnt += 1
    return cnt


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def quadrature(samples: np.ndarray, grid: Grid) -> float:
    """Composite Simpson integral of samples over the grid (odd node counts);
    even counts fall back to the trapezoid rule with a recorded warning."""
    y = np.asarray(samples, dtype=float)
    if len(y) != grid.n_points:
        raise ParameterError("sample count does not match grid")
    h = grid.spacing
    if grid.n_points % 2 == 1:
        return float(np.sum(_simpson_weights(grid.n_points, h) * y))
    warnings.warn("even node count: falling back to trapezoid quadrature", stacklevel=2)
    return float(np.trapezoid(y, dx=h))


def _thomas_pivot(off: np.ndarray, diag_shifted: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Tridiagonal solve with partial pivoting (fill-in in a second superdiagonal).
    n = len(diag_shifted)
    dl = np.concatenate([[0.0], off])
    d = diag_shifted.copy()
    du = np.concatenate([off, [0.0]])
    c = np.zeros(n)
    b = b.copy()
    for k in range(n - 1):
        if abs(dl[k + 1]) > abs(d[k]):
            d[k], dl[k + 1] = dl[k + 1], d[k]
            du[k], d[k + 1] = d[k + 1], du[k]
            c[k], du[k + 1] = du[k + 1], 0.0
            b[k], b[k + 1] = b[k + 1], b[k]
        piv = d[k] if d[k] != 0.0 else _PIVMIN
        m = dl[k + 1] / piv
        d[k + 1] -= m * du[k]
        du[k + 1] -= m * c[k]
        b[k + 1] -= m * b[k]
    x = np.zeros(n)
    x[n - 1] = b[n - 1] / (d[n - 1] if d[n - 1] != 0.0 else _PIVMIN)
    if n > 1:
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / (d[n - 2] if d[n - 2] != 0.0 else _PIVMIN)
    for k in range(n - 3, -1, -1):
        x[k] = (b[k] - du[k] * x[k + 1] - c[k] * x[k + 2]) / (d[k] if d[k] != 0.0 else _PIVMIN)
    return x


def eigenpairs(op: TridiagonalOperator, k: int, want_vectors: bool = False) -> Spectrum:
    """k lowest eigenvalues by Sturm bisection from Gershgorin bounds; optional
    eigenvectors by inverse iteration (shift guarded by 1e-10), Simpson-normalized
    on the full grid with zero boundary values."""
    if k < 1 or k > op.n:
        raise ParameterError(f"k must be in 1..{op.n}")
    d = list(map(float, op.diag))
    e2 = [float(e) ** 2 for e in op.off]
    glo, ghi = op.gershgorin()
    vals = []
    lo = glo
    for m in range(1, k + 1):
        a, b = lo, ghi
        # keep the lower edge of the previous eigenvalue as a valid lower bound
        while b - a > 1e-12 * max(1.0, abs(a), abs(b)):
            mid = 0.5 * (a + b)
            if _count(d, e2, mid) >= m:
                b = mid
            else:
                a = mid
        vals.append(0.5 * (a + b))
        lo = a
    eigvals = np.array(vals)
    if np.any(np.diff(eigvals) <= 0.0):
        eigvals = np.sort(eigvals)

    vectors = None
    if want_vectors:
        h = op.grid.spacing
        rng = np.random.RandomState(8801)
        w = _simpson_weights(op.grid.n_points, h)
        rows = []
        for lam in eigvals:
            b0 = rng.standard_normal(op.n)
            v = None
            resid = np.inf
            for _ in range(5):
                v = _thomas_pivot(op.off, op.diag - (lam + 1e-10), b0)
                v /= np.linalg.norm(v)
                b0 = v
                resid = np.linalg.norm(op.apply_interior(v) - lam * v)
                if resid < 1e-8 * max(1.0, abs(lam)):
                    break
            if resid >= 1e-8 * max(1.0, abs(lam)):
                raise ConvergenceError(f"inverse iteration stalled at lambda={lam} (residual {resid})")
            full = np.concatenate([[0.0], v, [0.0]])
            imax = int(np.argmax(np.abs(full)))
            if full[imax] < 0.0:
                full = -full
            full /= np.sqrt(np.sum(w * full * full))
            rows.append(full)
        vectors = np.array(rows)

    meta = {
        "x1": op.grid.interval.x1,
        "x2": op.grid.interval.x2,
        "n_points": op.grid.n_points,
        "spacing": op.grid.spacing,
    }
    return Spectrum(eigenvalues=eigvals, eigenvectors=vectors, grid_meta=meta)


def _test_battery(grid: Grid) -> list:
    x = grid.nodes()
    a, b = grid.interval.x1, grid.interval.x2
    mid = 0.5 * (a + b)
    width = b - a
    u = (x - mid) / width
    bump = np.exp(-16.0 * u**2)
    window = np.sin(2.0 * x) * np.cos(np.pi * u) ** 2
    return [bump, window]


def equivalence_check(df: DeformingFunction, amb, v: Callable, grid: Grid) -> float:
    """Max interior deviation between the ordered kinetic operator acting on V and
    the deformed operator acting on V_eff = V + V~, over a smooth test battery.

    The two nodes adjacent to each boundary are excluded.
    """
    from .ordering import OrderingContext, v_tilde_eval

    ctx = OrderingContext(df, amb)
    op_def = discretize_deformed(
        df,
        lambda t: np.asarray(v(t), dtype=float) + np.asarray(v_tilde_eval(ctx, t), dtype=float),
        grid,
    )

    def m_field(t):
        return np.asarray(deforming_eval(df, t).M, dtype=float)

    op_vr = discretize_vonroos(m_field, amb.primed, lambda t: np.asarray(v(t), dtype=float), grid)
    dev = 0.0
    for psi in _test_battery(grid):
        lhs = op_vr.apply(psi)
        rhs = op_def.apply(psi)
        dev = max(dev, float(np.max(np.abs(lhs[2:-2] - rhs[2:-2]))))
    return dev
