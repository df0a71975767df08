"""Value function assembly: European leg plus early-exercise premium.

The fair value of the American put decomposes as

    V(t, x) = K_lam(A, 1, t, x, T, A) + integral over (t, T] of
              K_lam(lam A + theta(u) alpha(u), lam + theta(u), t, x, u, b(u)) du,

with the integral discretized as a right Riemann sum on the boundary's own
mesh. Reusing the solver mesh makes the solved boundary an exact fixed point
of the discrete value map: at a mesh node t_i, V(t_i, b_i) = A - b_i to
solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import k_lambda
from .model import OUModel
from .solver import Boundary


@dataclass(frozen=True)
class ValuePoint:
    """One evaluation of the decomposed value function."""

    t: float
    x: float
    V: float
    european: float
    premium: float
    gain: float
    in_stopping_region: bool


def european_term(m: OUModel, t: float, x: float) -> float:
    """Discounted expected payoff of holding to expiry: K_lam(A, 1, t, x, T, A)."""
    return float(k_lambda(m, m.strike, 1.0, t, x, m.T, m.strike))


def premium_term(m: OUModel, b: Boundary, t: float, x: float) -> float:
    """Early-exercise premium as a right Riemann sum over mesh nodes past t.

    Off-mesh t joins as a temporary left edge: the first weight is the
    partial panel t_j - t, so the right-endpoint structure of the solver's
    discretization is preserved and the sum vanishes at t = T.
    """
    if not 0.0 <= t <= m.T:
        raise ValueError(f"t must lie in [0, {m.T}]")
    nodes = b.mesh.nodes
    if nodes[-1] != m.T:
        raise ValueError("boundary mesh horizon differs from model horizon")
    j0 = int(np.searchsorted(nodes, t, side="right"))
    if j0 >= len(nodes):
        return 0.0
    times = nodes[j0:]
    weights = np.diff(np.concatenate(([t], times)))
    theta_u = m.theta(times)
    c1 = m.lam * m.strike + theta_u * m.alpha(times)
    c2 = m.lam + theta_u
    kern = k_lambda(m, c1, c2, t, x, times, b.values[j0:])
    return float(weights @ kern)


def value(m: OUModel, b: Boundary, t: float, x: float) -> ValuePoint:
    """Assemble the decomposed value at (t, x).

    V(T, x) reduces to the gain exactly: the European leg degenerates to the
    payoff indicator and the premium sum is empty.
    """
    euro = european_term(m, t, x)
    prem = premium_term(m, b, t, x)
    gain = max(m.strike - x, 0.0)
    return ValuePoint(
        t=float(t),
        x=float(x),
        V=euro + prem,
        european=euro,
        premium=prem,
        gain=gain,
        in_stopping_region=bool(x <= float(b(t))),
    )


def smooth_fit_gap(m: OUModel, b: Boundary, t: float, h: float | None = None) -> float:
    """Deviation of the one-sided value slope at the boundary from -1.

    Returns (V(t, b(t)+h) - V(t, b(t)))/h + 1; a solved boundary should make
    this small for t strictly inside (0, T). The default step scales with the
    exercise depth so the probe stays meaningful across strikes.
    """
    if not 0.0 < t < m.T:
        raise ValueError("smooth fit is probed strictly inside (0, T)")
    level = float(b(t))
    if h is None:
        h = 1e-4 * (m.strike - level + 1.0)
    if h <= 0.0:
        raise ValueError("step h must be positive")
    v_at = value(m, b, t, level).V
    v_up = value(m, b, t, level + h).V
    return (v_up - v_at) / h + 1.0
