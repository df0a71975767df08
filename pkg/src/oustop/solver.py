"""Exercise-boundary solvers for the finite-horizon put.

The optimal stopping boundary b solves the nonlinear Volterra-type equation

    b(t) = K - K_euro(t, b(t)) - int_t^T Kp(t, b(t), u, b(u)) du,

where K_euro(t, x) = k_lambda(K, 1, t, x, T, K) is the European part and
Kp(t, x, u, y) = k_lambda(lam K + theta(u) alpha(u), lam + theta(u), t, x, u, y)
the premium kernel. Discretized on a mesh {t_i} with the integral as a right
Riemann sum, the equation becomes a fixed-point problem

    b_i = K - K_euro(t_i, b_i) - sum_{j > i} (t_j - t_{j-1}) Kp(t_i, b_i, t_j, b_j),

solved here two ways:

* Picard iteration: sweep the whole mesh with the previous iterate on both
  sides, starting from the flat profile b == b(T); stop when the squared
  l2 distance between successive iterates drops below delta. Non-convergence
  is reported as data, never raised.
* Backward induction: walk i = N-1 .. 0, at each node solving the scalar
  fixed point with the later values frozen (damped iteration). Serves as an
  independent cross-check of the Picard route.

The mesh is logarithmic, t_i = T ln(1 + i (e - 1) / N), concentrating nodes
near expiry where the boundary moves fastest. The terminal node is pinned to
min(strike, gamma_bound(T)) and never iterated. Both solvers require the
unit-volatility form; bring general models through to_unit_volatility first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernel import k_lambda_stats
from .model import OUModel, gamma_bound, terminal_boundary

__all__ = [
    "Mesh",
    "Boundary",
    "SolverConfig",
    "SolverReport",
    "NodeConvergenceError",
    "make_log_mesh",
    "picard_step",
    "squared_distance",
    "picard_solve",
    "backward_induction_solve",
    "put_call_transform",
]

# Width of the default divergence clamp in units of max_t gamma(0, t).
_CLAMP_WIDTHS = 20.0

# Scalar fixed-point controls for the backward-induction solver.
_NODE_TOL = 1e-9
# value matching is nearly neutral next to expiry (map slope -> 1 as the
# interval shrinks), so the scalar iteration crawls there; the budget covers
# contraction rates down to ~1 - 3e-5
_NODE_MAX_ITER = 400_000
_NODE_DAMPING = 0.5


@dataclass(frozen=True, eq=False)
class Mesh:
    """Strictly increasing time nodes t_0 = 0 < ... < t_N = T."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise ValueError("mesh needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("mesh must start at t = 0")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("mesh nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_intervals(self) -> int:
        return len(self.nodes) - 1

    @property
    def horizon(self) -> float:
        return float(self.nodes[-1])


def make_log_mesh(T: float, N: int) -> Mesh:
    """Logarithmic mesh t_i = T ln(1 + i (e - 1) / N), i = 0..N."""
    if not (np.isfinite(T) and T > 0):
        raise ValueError("horizon T must be positive and finite")
    if not (isinstance(N, (int, np.integer)) and N >= 1):
        raise ValueError("N must be a positive integer")
    i = np.arange(N + 1, dtype=float)
    nodes = T * np.log1p(i * (np.e - 1.0) / N)
    nodes[0] = 0.0
    nodes[-1] = T  # ln(e) may round away from 1; pin the endpoint
    return Mesh(nodes)


@dataclass(frozen=True, eq=False)
class Boundary:
    """Boundary values on a mesh; piecewise linear between nodes."""

    mesh: Mesh
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.mesh.nodes.shape:
            raise ValueError("boundary values must match the mesh nodes")
        if not np.all(np.isfinite(values)):
            raise ValueError("boundary values must be finite")
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.interp(t_arr, self.mesh.nodes, self.values)
        return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class SolverConfig:
    """Controls for both solvers; clamp_low None means the automatic default."""

    N: int = 200
    delta: float = 1e-3
    max_iter: int = 500
    clamp_low: float | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not (np.isfinite(self.delta) and self.delta > 0) and not np.isposinf(self.delta):
            raise ValueError("delta must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class SolverReport:
    """Outcome of one solve. errors[k-1] is the squared step distance d_k."""

    boundary: Boundary
    errors: tuple[float, ...]
    iterations: int
    converged: bool
    clamped: bool = False


class NodeConvergenceError(RuntimeError):
    """Backward induction failed to settle a node's scalar fixed point."""

    def __init__(self, node: int, residual: float):
        self.node = node
        self.residual = residual
        super().__init__(
            f"scalar fixed point did not converge at node {node} (residual {residual:.3e})"
        )


class _PicardTables:
    """Per-(model, mesh) precompute shared by both solvers.

    Holds the upper-triangular transition tables between all node pairs and
    the premium-kernel coefficients at the nodes. Built once per solve and
    then treated as read-only, so concurrent sweeps can share it.
    """

    def __init__(self, m: OUModel, mesh: Mesh):
        if not m.unit_volatility:
            raise ValueError(
                "solver requires the unit-volatility form; apply to_unit_volatility first"
            )
        eng = m.integrals()
        t = mesh.nodes
        self.model = m
        self.mesh = mesh
        th_cum = eng.theta_cum(t)
        p_cum = eng.p_cum(t)
        q_cum = eng.q_cum(t)
        decay = np.exp(-th_cum)
        self.slope = np.exp(th_cum[:, None] - th_cum[None, :])
        self.offset = (p_cum[None, :] - p_cum[:, None]) * decay[None, :]
        var = (q_cum[None, :] - q_cum[:, None]) * decay[None, :] ** 2
        self.gamma = np.sqrt(np.maximum(var, 0.0))
        self.discount = np.exp(-m.lam * (t[None, :] - t[:, None]))
        self.dt = np.diff(t)  # dt[j-1] = t_j - t_{j-1}
        theta_nodes = np.asarray(m.theta(t), dtype=float)
        alpha_nodes = np.asarray(m.alpha(t), dtype=float)
        self.prem_c1 = m.lam * m.strike + theta_nodes * alpha_nodes
        self.prem_c2 = m.lam + theta_nodes
        self.terminal = terminal_boundary(m)
        self.gamma_nodes = gamma_bound(m, t)
        # j > i mask: the premium sum runs over nodes strictly to the right.
        n = len(t)
        self.future = np.triu(np.ones((n, n), dtype=bool), k=1)

    def default_clamp(self) -> float:
        spread = float(np.max(self.gamma[0, 1:])) if len(self.mesh.nodes) > 1 else 0.0
        return self.model.strike - _CLAMP_WIDTHS * spread

    def sweep(self, values: np.ndarray) -> np.ndarray:
        """One full Picard sweep: previous values on both kernel slots."""
        strike = self.model.strike
        nu = self.slope * values[:, None] + self.offset
        prem = k_lambda_stats(
            self.prem_c1[None, :],
            self.prem_c2[None, :],
            nu,
            self.gamma,
            values[None, :],
            self.discount,
        )
        premium = np.where(self.future, prem, 0.0)[:, 1:] @ self.dt
        euro = k_lambda_stats(
            strike, 1.0, nu[:, -1], self.gamma[:, -1], strike, self.discount[:, -1]
        )
        new = strike - euro - premium
        new[-1] = self.terminal
        return new

    def node_update(self, i: int, x: float, values: np.ndarray) -> float:
        """Right-hand side at node i with state x and later nodes frozen."""
        strike = self.model.strike
        j = np.arange(i + 1, len(self.mesh.nodes))
        nu = self.slope[i, j] * x + self.offset[i, j]
        prem = k_lambda_stats(
            self.prem_c1[j], self.prem_c2[j], nu, self.gamma[i, j], values[j], self.discount[i, j]
        )
        premium = float(np.sum(self.dt[i:] * prem))
        euro = k_lambda_stats(
            strike, 1.0, nu[-1], self.gamma[i, -1], strike, self.discount[i, -1]
        )
        return strike - float(euro) - premium


def picard_step(
    m: OUModel,
    b_prev: Boundary,
    tables: _PicardTables | None = None,
    clamp_low: float | None = None,
) -> Boundary:
    """One Picard sweep of the discretized boundary equation.

    The previous iterate enters both as the conditioning state at t_i and as
    the truncation level at every later node (a pure sweep, not Gauss-Seidel).
    The terminal node is re-pinned to min(strike, gamma_bound(T)) bit-exactly.
    """
    if tables is None:
        tables = _PicardTables(m, b_prev.mesh)
    new = tables.sweep(b_prev.values)
    if clamp_low is not None:
        np.maximum(new, clamp_low, out=new)
    return Boundary(b_prev.mesh, new)


def squared_distance(b_new: Boundary, b_prev: Boundary) -> float:
    """Squared l2 distance between two iterates on the same mesh."""
    if not np.array_equal(b_new.mesh.nodes, b_prev.mesh.nodes):
        raise ValueError("boundaries live on different meshes")
    diff = b_new.values - b_prev.values
    return float(np.dot(diff, diff))


def picard_solve(m: OUModel, config: SolverConfig = SolverConfig()) -> SolverReport:
    """Iterate picard_step from the flat profile b == b(T) until d_k < delta.

    Non-convergence within max_iter returns a report with converged=False;
    it never raises. Iterates are floored at clamp_low (a wide default keyed
    to the transition spread) and the report flags if the floor was ever hit.
    """
    tables = _PicardTables(m, make_log_mesh(m.T, config.N))
    clamp = config.clamp_low if config.clamp_low is not None else tables.default_clamp()
    values = np.full(config.N + 1, tables.terminal, dtype=float)
    errors: list[float] = []
    clamped = False
    for k in range(1, config.max_iter + 1):
        new = tables.sweep(values)
        if np.any(new < clamp):
            clamped = True
            np.maximum(new, clamp, out=new)
        d_k = float(np.dot(new - values, new - values))
        errors.append(d_k)
        values = new
        if d_k < config.delta:
            return SolverReport(
                boundary=Boundary(tables.mesh, values),
                errors=tuple(errors),
                iterations=k,
                converged=True,
                clamped=clamped,
            )
    return SolverReport(
        boundary=Boundary(tables.mesh, values),
        errors=tuple(errors),
        iterations=config.max_iter,
        converged=False,
        clamped=clamped,
    )


def backward_induction_solve(m: OUModel, config: SolverConfig = SolverConfig()) -> SolverReport:
    """Solve node-by-node from expiry, freezing later values.

    At each node the scalar fixed point x = F_i(x) is iterated with 0.5
    damping whenever the update direction flips; failure to reach 1e-9 within
    the iteration budget raises NodeConvergenceError naming the node.
    """
    tables = _PicardTables(m, make_log_mesh(m.T, config.N))
    clamp = config.clamp_low if config.clamp_low is not None else tables.default_clamp()
    n = config.N
    values = np.empty(n + 1, dtype=float)
    values[n] = tables.terminal
    total_iter = 0
    clamped = False
    for i in range(n - 1, -1, -1):
        x = values[i + 1]
        damp = 1.0
        prev_step = 0.0
        for _ in range(_NODE_MAX_ITER):
            total_iter += 1
            residual = tables.node_update(i, x, values) - x
            if abs(residual) <= _NODE_TOL:
                break
            step = damp * residual
            if prev_step != 0.0 and step * prev_step < 0.0:
                # halving on each direction flip settles any oscillatory map
                # into a monotone one, after which damp stays put
                damp *= _NODE_DAMPING
                step = damp * residual
            x += step
            prev_step = step
        else:
            raise NodeConvergenceError(i, abs(residual))
        if x < clamp:
            x = clamp
            clamped = True
        values[i] = x
    return SolverReport(
        boundary=Boundary(tables.mesh, values),
        errors=(),
        iterations=total_iter,
        converged=True,
        clamped=clamped,
    )


def put_call_transform(b: Boundary, strike: float) -> Boundary:
    """Reflect a put boundary into the matching call boundary: 2 K - b.

    The call written on the reflected state 2 K - X (pulling level 2 K - alpha,
    same theta and sigma) is exercised when that state rises to the reflected
    boundary; values map through V_call(t, x) = V_put(t, 2 K - x).
    """
    if not np.isfinite(strike):
        raise ValueError("strike must be finite")
    return Boundary(b.mesh, 2.0 * strike - b.values)
