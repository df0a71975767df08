"""Composite Gauss-Legendre machinery for coefficient integrals.

The transition law of the mean-reverting diffusion between two times is
Gaussian with moments built from three cumulative integrals of the
coefficients,

    Theta(t) = int_0^t theta(u) du,
    P(t)     = int_0^t e^{Theta(u)} theta(u) alpha(u) du,
    Q(t)     = int_0^t e^{2 Theta(u)} sigma(u)^2 du,

because for t1 <= t2

    mean(t1, x, t2) = e^{Theta(t1) - Theta(t2)} x + (P(t2) - P(t1)) e^{-Theta(t2)},
    var(t1, t2)     = (Q(t2) - Q(t1)) e^{-2 Theta(t2)}.

Everything here evaluates those cumulatives on a fixed composite grid with
16 Gauss-Legendre nodes per panel. Panels refine uniformly and always break
at coefficient knots, so each integrand is smooth panel-by-panel and the
rule is effectively exact (relative error well below 1e-9 for the supported
coefficient families). Partial panels for off-grid query times reuse the
same 16-node rule.
"""

from __future__ import annotations

import numpy as np

__all__ = ["CumulativeIntegral", "CoefficientIntegrals"]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)

# Uniform panel density: at least this many panels per unit time.
_PANELS_PER_UNIT = 32
_MIN_PANELS = 64


def _panel_nodes(a, b):
    """16-node Gauss-Legendre nodes/weights on [a, b]; broadcasts, adds an axis."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[..., None] + half[..., None] * _GL_X
    w = half[..., None] * _GL_W
    return x, w


def _build_edges(t_max: float, breakpoints) -> np.ndarray:
    n = max(_MIN_PANELS, int(np.ceil(_PANELS_PER_UNIT * t_max)))
    edges = np.linspace(0.0, t_max, n + 1)
    interior = np.asarray(
        [b for b in breakpoints if 0.0 < b < t_max], dtype=float
    )
    if interior.size:
        edges = np.union1d(edges, interior)
    return edges


class _PanelGrid:
    def __init__(self, t_max: float, breakpoints=()):
        if not (np.isfinite(t_max) and t_max > 0):
            raise ValueError("t_max must be a positive finite number")
        self.t_max = float(t_max)
        self.edges = _build_edges(self.t_max, breakpoints)

    def _locate(self, t):
        k = np.searchsorted(self.edges, t, side="right") - 1
        return np.clip(k, 0, len(self.edges) - 2)

    def _eval(self, f, x):
        flat = f(x.reshape(-1))
        return np.asarray(flat, dtype=float).reshape(x.shape)


class CumulativeIntegral(_PanelGrid):
    """F(t) = int_0^t f(u) du for t in [0, t_max], vectorized in t."""

    def __init__(self, f, t_max: float, breakpoints=()):
        super().__init__(t_max, breakpoints)
        self._f = f
        x, w = _panel_nodes(self.edges[:-1], self.edges[1:])
        panel = (w * self._eval(f, x)).sum(-1)
        self._cum = np.concatenate([[0.0], np.cumsum(panel)])

    def value(self, t):
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        x, w = _panel_nodes(self.edges[k], t)
        return self._cum[k] + (w * self._eval(self._f, x)).sum(-1)


class CoefficientIntegrals(_PanelGrid):
    """Cumulative Theta, P, Q for one coefficient triple (theta, alpha, sigma).

    Theta at the Gauss nodes themselves is needed to build P and Q, so it is
    obtained by a nested partial-panel pass before the outer sums.
    """

    def __init__(self, theta, alpha, sigma, t_max: float, breakpoints=()):
        super().__init__(t_max, breakpoints)
        self._theta = theta
        self._alpha = alpha
        self._sigma = sigma

        x, w = _panel_nodes(self.edges[:-1], self.edges[1:])  # (M, 16)
        th = self._eval(theta, x)

        # Theta at interior Gauss nodes: integrate from the panel's left edge.
        left = np.broadcast_to(self.edges[:-1][:, None], x.shape)
        x_in, w_in = _panel_nodes(left, x)  # (M, 16, 16)
        theta_partial = (w_in * self._eval(theta, x_in)).sum(-1)

        panel_theta = (w * th).sum(-1)
        self._theta_cum = np.concatenate([[0.0], np.cumsum(panel_theta)])

        growth = np.exp(self._theta_cum[:-1, None] + theta_partial)
        p_integrand = growth * th * self._eval(alpha, x)
        q_integrand = growth**2 * self._eval(sigma, x) ** 2
        self._p_cum = np.concatenate([[0.0], np.cumsum((w * p_integrand).sum(-1))])
        self._q_cum = np.concatenate([[0.0], np.cumsum((w * q_integrand).sum(-1))])

    def theta_cum(self, t):
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        x, w = _panel_nodes(self.edges[k], t)
        return self._theta_cum[k] + (w * self._eval(self._theta, x)).sum(-1)

    def p_cum(self, t):
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        x, w = _panel_nodes(self.edges[k], t)
        growth = np.exp(self.theta_cum(x))
        integrand = growth * self._eval(self._theta, x) * self._eval(self._alpha, x)
        return self._p_cum[k] + (w * integrand).sum(-1)

    def q_cum(self, t):
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        x, w = _panel_nodes(self.edges[k], t)
        growth = np.exp(self.theta_cum(x))
        integrand = growth**2 * self._eval(self._sigma, x) ** 2
        return self._q_cum[k] + (w * integrand).sum(-1)

    def stats(self, t1, t2):
        """(slope, offset, var) of the transition from t1 to t2, broadcast.

        mean(t1, x, t2) = slope * x + offset; var is the Gaussian variance.
        Exact zeros fall out for t1 == t2 because the partial-panel sums
        cancel term by term.
        """
        th1 = self.theta_cum(t1)
        th2 = self.theta_cum(t2)
        slope = np.exp(th1 - th2)
        decay = np.exp(-th2)
        offset = (self.p_cum(t2) - self.p_cum(t1)) * decay
        var = (self.q_cum(t2) - self.q_cum(t1)) * decay**2
        return slope, offset, np.maximum(var, 0.0)
