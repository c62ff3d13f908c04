"""Finite-difference eigenvalue oracle for H = -1/2 d^2/dx^2 + V(x).

Second-order three-point stencil on [-L, L] with Dirichlet ends.  The lowest
eigenvalues are bracketed with Sturm counts (multisection) and the
eigenvectors recovered by inverse iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import InputError, NumericalError

MAX_LEVELS = 12


@dataclass(frozen=True)
class Grid:
    half_width: float = 12.0
    n_points: int = 4001
    # tiny grids are only useful for inspecting the stencil by hand
    allow_small: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.half_width > 0:
            raise InputError(f"half_width must be positive, got {self.half_width}")
        min_points = 3 if self.allow_small else 101
        if self.n_points < min_points or self.n_points % 2 == 0:
            raise InputError(f"n_points must be odd and >= {min_points}, got {self.n_points}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def x(self):
        return -self.half_width + self.h * np.arange(self.n_points)

    def refined(self) -> "Grid":
        return Grid(self.half_width, 2 * self.n_points - 1)

    def widened(self, extra: float) -> "Grid":
        """Same spacing, half-width grown by ``extra`` (rounded to whole steps)."""
        steps = int(round(extra / self.h))
        return Grid(self.half_width + steps * self.h, self.n_points + 2 * steps)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Interior-point matrix: diagonal 1/h^2 + V(x_i), constant off-diagonal -1/(2h^2)."""

    diagonal: np.ndarray
    offdiag: float
    grid: Grid

    @property
    def size(self) -> int:
        return self.diagonal.size

    def gershgorin(self):
        r = 2.0 * abs(self.offdiag)
        return float(self.diagonal.min() - r), float(self.diagonal.max() + r)

    def matvec(self, v):
        out = self.diagonal * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


def discretize(V, grid: Grid) -> TridiagonalOperator:
    xi = grid.x[1:-1]
    v = np.asarray(V(xi), dtype=float)
    if v.shape != xi.shape:
        v = np.broadcast_to(v, xi.shape).astype(float)
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        i = int(bad[0]) + 1
        raise InputError(f"potential is not finite at grid node {i} (x = {grid.x[i]:.6g})")
    h = grid.h
    return TridiagonalOperator(1.0 / h**2 + v, -0.5 / h**2, grid)


def sturm_count(op: TridiagonalOperator, lam):
    """Number of eigenvalues strictly below lam (scalar or array)."""
    lam = np.asarray(lam, dtype=float)
    e2 = op.offdiag**2
    pivmin = np.finfo(float).tiny * max(1.0, e2)
    d = op.diagonal
    q = d[0] - lam
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(int)
    for i in range(1, d.size):
        q = (d[i] - lam) - e2 / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count if count.ndim else int(count)


def _bracket_lowest(op, m, tol, sections=32):
    lo_b, hi_b = op.gershgorin()
    lo = np.full(m, lo_b)
    hi = np.full(m, hi_b)
    target = np.arange(m)
    t = np.arange(1, sections + 1) / (sections + 1)
    while True:
        active = (hi - lo) > tol
        if not active.any():
            return 0.5 * (lo + hi), hi - lo
        pts = lo[active, None] + (hi - lo)[active, None] * t[None, :]
        counts = sturm_count(op, pts.ravel()).reshape(pts.shape)
        tgt = target[active, None]
        below = counts <= tgt
        # largest point with count <= j is a new lower bound; smallest with count > j a new upper bound
        new_lo = np.where(below, pts, -np.inf).max(axis=1)
        new_hi = np.where(~below, pts, np.inf).min(axis=1)
        idx = np.flatnonzero(active)
        lo[idx] = np.maximum(lo[idx], new_lo)
        hi[idx] = np.minimum(hi[idx], new_hi)


def _inverse_iteration(op, lam, index, max_sweeps=50, conv=1e-10, seed=0):
    n = op.size
    ab = np.zeros((3, n))
    ab[0, 1:] = op.offdiag
    ab[2, :-1] = op.offdiag
    # the shift sits a hair below the bracket so the factorisation is never exactly singular
    ab[1] = op.diagonal - (lam - 1e-12 * max(1.0, abs(lam)))
    v = np.random.default_rng(seed + index).standard_normal(n)
    v /= np.linalg.norm(v)
    for sweep in range(max_sweeps):
        try:
            w = solve_banded((1, 1), ab, v, check_finite=False)
        except np.linalg.LinAlgError:
            ab[1] -= 1e-10 * max(1.0, abs(lam))
            continue
        w /= np.linalg.norm(w)
        if w @ v < 0:
            w = -w
        if np.max(np.abs(w - v)) < conv:
            return w, sweep + 1
        v = w
    raise NumericalError(f"inverse iteration stagnated for eigenvalue index {index}")


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # shape (m, N), zero at both ends, sum(h v^2) = 1
    grid: Grid
    brackets: np.ndarray
    sweeps: list = field(default_factory=list)
    convergence: np.ndarray | None = None  # E(h/2) - E(h), when requested

    def gram(self):
        h = self.grid.h
        return h * self.eigenvectors @ self.eigenvectors.T


def lowest_eigenpairs(op: TridiagonalOperator, m: int, tol: float = 1e-10) -> SpectralResult:
    if not 1 <= m <= MAX_LEVELS:
        raise InputError(f"m must be between 1 and {MAX_LEVELS}, got {m}")
    if tol < 1e-12:
        raise InputError(f"tol must be >= 1e-12, got {tol}")
    # resolve the bracket relative to the Gershgorin scale when tol is below its ulp
    lo_b, hi_b = op.gershgorin()
    eff_tol = max(tol, 8 * np.finfo(float).eps * max(abs(lo_b), abs(hi_b)))
    vals, widths = _bracket_lowest(op, m, eff_tol)
    h = op.grid.h
    vecs = np.zeros((m, op.size + 2))
    sweeps = []
    for j, lam in enumerate(vals):
        v, s = _inverse_iteration(op, lam, j)
        vecs[j, 1:-1] = v / math.sqrt(h)
        # fix the sign convention: positive just right of the left edge
        nz = np.flatnonzero(np.abs(vecs[j]) > 1e-8 * np.abs(vecs[j]).max())
        if vecs[j, nz[0]] < 0:
            vecs[j] = -vecs[j]
        sweeps.append(s)
    return SpectralResult(vals, vecs, op.grid, widths, sweeps)


def solve(V, grid: Grid | None = None, m: int = 6, tol: float = 1e-10, refine=False) -> SpectralResult:
    """Discretise V and return its m lowest eigenpairs.

    With ``refine`` the run is repeated at half spacing and the shifts
    E(h/2) - E(h) are stored in ``convergence``.
    """
    grid = grid or Grid()
    res = lowest_eigenpairs(discretize(V, grid), m, tol)
    if refine:
        fine = lowest_eigenpairs(discretize(V, grid.refined()), m, tol)
        res.convergence = fine.eigenvalues - res.eigenvalues
    return res


def overlap(psi, eigvec, grid: Grid) -> float:
    """|<psi, v>| with the h-weighted inner product after normalising sampled psi."""
    x = grid.x
    samples = np.asarray(psi(x) if callable(psi) else psi, dtype=float)
    h = grid.h
    n2 = h * samples @ samples
    if not n2 > 0:
        raise NumericalError("closed-form state has zero norm on the grid")
    v = np.asarray(eigvec, dtype=float)
    nv = h * v @ v
    if not nv > 0:
        raise NumericalError("eigenvector has zero norm")
    return float(abs(h * samples @ v) / math.sqrt(n2 * nv))
