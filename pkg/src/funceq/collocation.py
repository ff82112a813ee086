"""Piecewise-linear collocation on a uniform grid.

The approximation ``u_h(x) = a_i*x + b_i`` on each cell ``[x_{i-1}, x_i]``
is determined by a dense 2n x 2n linear system: one continuity equation per
interior node, one collocation equation per interior node (the functional
equation required to hold there exactly), and the two boundary conditions
``u_h(0) = u_h(1) = 0``.  Because the mixing maps send a node anywhere in
[0, 1], the collocation rows couple distant cells and the matrix is neither
symmetric nor banded; it is solved by dense LU with partial pivoting.

Invertibility of the system has no known proof in general, so a numerically
singular matrix raises :class:`SingularSystemError` instead of silently
regularizing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .problem import Problem

DOMAIN_TOL = 1e-12  # slack for arguments an ulp outside [0, 1]
SINGULAR_PIVOT = 1e-14
CONDITION_PIVOT_RATIO = 1e-10


class SingularSystemError(RuntimeError):
    """The collocation matrix is numerically singular."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_i = i*h, h = 1/n, 0 <= i <= n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid needs at least one subinterval")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)


def locate(g: Grid, t: float) -> int:
    """Index i in [1, n] of the subinterval [x_{i-1}, x_i] containing t.

    At an interior node the left interval is returned (the value of a
    continuous piecewise-linear function is the same either way; fixing
    the convention makes assembly bit-reproducible).
    """
    if not -DOMAIN_TOL <= t <= 1.0 + DOMAIN_TOL:
        raise ValueError(f"t={t!r} outside [0, 1]")
    idx = int(np.searchsorted(g.nodes, t, side="left"))
    if idx < 1:
        return 1
    return min(idx, g.n)


def _locate_array(g: Grid, ts: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(g.nodes, ts, side="left")
    return np.clip(idx, 1, g.n)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function u(x) = a_i*x + b_i per cell."""

    grid: Grid
    a: np.ndarray  # slope on cell i+1, length n
    b: np.ndarray  # intercept on cell i+1, length n

    def __post_init__(self):
        if len(self.a) != self.grid.n or len(self.b) != self.grid.n:
            raise ValueError("coefficient arrays must have length n")

    def eval(self, t: float) -> float:
        i = locate(self.grid, t) - 1
        return float(self.a[i] * t + self.b[i])

    __call__ = eval

    def eval_array(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < -DOMAIN_TOL or ts.max() > 1.0 + DOMAIN_TOL):
            raise ValueError("evaluation points outside [0, 1]")
        idx = _locate_array(self.grid, ts) - 1
        return self.a[idx] * ts + self.b[idx]

    @property
    def nodal_values(self) -> np.ndarray:
        """Values at the grid nodes, identical to eval at each node."""
        xs = self.grid.nodes
        vals = np.empty(self.grid.n + 1)
        vals[0] = self.b[0]
        vals[1:] = self.a * xs[1:] + self.b
        return vals

    @classmethod
    def from_nodes(cls, grid: Grid, values: np.ndarray) -> "PiecewiseLinear":
        values = np.asarray(values, dtype=float)
        if len(values) != grid.n + 1:
            raise ValueError("need one value per node")
        xs = grid.nodes
        a = np.diff(values) * grid.n
        b = values[:-1] - a * xs[:-1]
        return cls(grid, a, b)

    @classmethod
    def zero(cls, grid: Grid) -> "PiecewiseLinear":
        return cls(grid, np.zeros(grid.n), np.zeros(grid.n))

    def max_slope(self) -> float:
        """Exact Lipschitz seminorm (piecewise-linear, so max |a_i|)."""
        return float(np.max(np.abs(self.a)))


def project(g: Grid, v: Callable[[float], float]) -> PiecewiseLinear:
    """Nodal interpolant: the line through (x_{i-1}, v(x_{i-1})), (x_i, v(x_i))."""
    xs = g.nodes
    if hasattr(v, "eval_array"):
        values = v.eval_array(xs)
    else:
        values = np.array([float(v(float(t))) for t in xs])
    return PiecewiseLinear.from_nodes(g, values)


ROW_BOUNDARY = "boundary"
ROW_CONTINUITY = "continuity"
ROW_COLLOCATION = "collocation"


@dataclass
class CollocationSystem:
    """Dense 2n x 2n system in the unknowns z = (a_1, b_1, ..., a_n, b_n)."""

    grid: Grid
    matrix: np.ndarray
    rhs: np.ndarray
    row_labels: list[str]
    problem: Problem
    assembly_time: float = 0.0

    @property
    def dimension(self) -> int:
        return 2 * self.grid.n


@dataclass
class SolveReport:
    solution: PiecewiseLinear
    residual_max: float
    assembly_time: float
    solve_time: float
    condition_warning: bool


def assemble(p: Problem, g: Grid) -> CollocationSystem:
    """Build the collocation system for a homogenized problem.

    Unknown ordering is interleaved, z = (a_1, b_1, ..., a_n, b_n), which
    keeps continuity rows local.  Row layout: the left boundary condition
    b_1 = 0, then n-1 continuity rows, then n-1 collocation rows, then the
    right boundary condition a_n + b_n = 0.  Collocation at x_i uses cell i
    for the left-hand side (x_i is its right endpoint); when a mixing map
    sends x_i back into cell i the couplings accumulate additively.
    """
    if not p.homogeneous:
        raise ValueError("problem must be homogenized before assembly")
    start = time.perf_counter()
    n = g.n
    dim = 2 * n
    xs = g.nodes
    A = np.zeros((dim, dim))
    rhs = np.zeros(dim)
    labels = [""] * dim

    def a_col(i: int) -> int:  # 1-based cell index
        return 2 * (i - 1)

    def b_col(i: int) -> int:
        return 2 * (i - 1) + 1

    interior = xs[1:n]  # x_1 .. x_{n-1}
    phi_v = p.phi.eval_array(interior)
    phi1_v = p.phi1.eval_array(interior)
    phi2_v = p.phi2.eval_array(interior)
    f_v = p.f.eval_array(interior)
    j_cells = _locate_array(g, phi1_v)
    k_cells = _locate_array(g, phi2_v)

    row = 0
    A[row, b_col(1)] = 1.0
    labels[row] = ROW_BOUNDARY
    row += 1

    for i in range(1, n):
        xi = xs[i]
        A[row, a_col(i)] += xi
        A[row, b_col(i)] += 1.0
        A[row, a_col(i + 1)] -= xi
        A[row, b_col(i + 1)] -= 1.0
        labels[row] = ROW_CONTINUITY
        row += 1

    for i in range(1, n):
        xi = xs[i]
        w = phi_v[i - 1]
        j = int(j_cells[i - 1])
        k = int(k_cells[i - 1])
        A[row, a_col(i)] += xi
        A[row, b_col(i)] += 1.0
        A[row, a_col(j)] -= w * phi1_v[i - 1]
        A[row, b_col(j)] -= w
        A[row, a_col(k)] -= (1.0 - w) * phi2_v[i - 1]
        A[row, b_col(k)] -= 1.0 - w
        rhs[row] = f_v[i - 1]
        labels[row] = ROW_COLLOCATION
        row += 1

    A[row, a_col(n)] = 1.0
    A[row, b_col(n)] = 1.0
    labels[row] = ROW_BOUNDARY

    elapsed = time.perf_counter() - start
    return CollocationSystem(g, A, rhs, labels, p, assembly_time=elapsed)


def collocation_residual(p: Problem, u: PiecewiseLinear) -> float:
    """Max absolute defect of the functional equation at the interior nodes.

    Evaluated by direct substitution through :meth:`PiecewiseLinear.eval`,
    independently of the assembled matrix and the linear solver.
    """
    g = u.grid
    worst = 0.0
    for i in range(1, g.n):
        xi = float(g.nodes[i])
        w = p.phi(xi)
        t_val = w * u.eval(p.phi1(xi)) + (1.0 - w) * u.eval(p.phi2(xi))
        worst = max(worst, abs(u.eval(xi) - t_val - p.f(xi)))
    return worst


def solve(sys: CollocationSystem) -> SolveReport:
    """Solve the assembled system by dense LU with partial pivoting.

    Raises :class:`SingularSystemError` when a pivot falls below 1e-14 in
    magnitude; flags ``condition_warning`` when the smallest pivot is below
    1e-10 times the largest.
    """
    start = time.perf_counter()
    lu, piv = lu_factor(sys.matrix)
    pivots = np.abs(np.diag(lu))
    if float(np.min(pivots)) < SINGULAR_PIVOT:
        raise SingularSystemError(
            f"collocation matrix numerically singular (pivot {np.min(pivots):.3e})"
        )
    condition_warning = bool(np.min(pivots) < CONDITION_PIVOT_RATIO * np.max(pivots))
    z = lu_solve((lu, piv), sys.rhs)
    solve_time = time.perf_counter() - start

    u = PiecewiseLinear(sys.grid, z[0::2].copy(), z[1::2].copy())
    residual = collocation_residual(sys.problem, u)
    return SolveReport(
        solution=u,
        residual_max=residual,
        assembly_time=sys.assembly_time,
        solve_time=solve_time,
        condition_warning=condition_warning,
    )


def solve_problem(p: Problem, n: int) -> SolveReport:
    """Assemble and solve in one step on an n-cell grid."""
    return solve(assemble(p, Grid(n)))
