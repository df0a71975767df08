"""Discounted truncated-first-moment kernel of the Gaussian transition law.

Building block for both the boundary equation and the value decomposition:

    K(c1, c2, t1, x1, t2, x2) = e^{-lam (t2 - t1)} E[(c1 - c2 X_{t2}) 1{X_{t2} <= x2} | X_{t1} = x1].

With the transition law N(nu, gamma^2) this has the closed form

    e^{-lam (t2 - t1)} [ (c1 - c2 nu) Phi(z) + c2 gamma phi(z) ],   z = (x2 - nu) / gamma,

degenerating to (c1 - c2 x1) 1{x1 <= x2} as gamma -> 0 (in particular at
t2 == t1). z is clamped to +-40, far beyond where Phi saturates in float64.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from .model import OUModel, _check_times

__all__ = ["normal_pdf", "normal_cdf", "k_lambda", "k_lambda_stats", "Z_CLAMP"]

_SQRT_2PI = np.sqrt(2.0 * np.pi)

Z_CLAMP = 40.0


def normal_pdf(z):
    """Standard normal density, vectorized."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z * z) / _SQRT_2PI
    return float(out) if out.ndim == 0 else out


def normal_cdf(z):
    """Standard normal distribution function (erf-based, abs error < 1e-15)."""
    out = ndtr(np.asarray(z, dtype=float))
    return float(out) if out.ndim == 0 else out


def k_lambda_stats(c1, c2, nu, gamma, x2, discount):
    """Kernel from precomputed transition stats; broadcasts over arrays.

    gamma == 0 entries take the degenerate branch with nu in place of x1
    (at zero variance the state is nu with certainty).
    """
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    nu = np.asarray(nu, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    discount = np.asarray(discount, dtype=float)

    degenerate = gamma == 0.0
    safe = np.where(degenerate, 1.0, gamma)
    z = np.clip((x2 - nu) / safe, -Z_CLAMP, Z_CLAMP)
    smooth = (c1 - c2 * nu) * ndtr(z) + c2 * safe * normal_pdf(z)
    point = (c1 - c2 * nu) * (nu <= x2)
    out = discount * np.where(degenerate, point, smooth)
    return float(out) if out.ndim == 0 else out


def k_lambda(m: OUModel, c1, c2, t1: float, x1: float, t2, x2):
    """Discounted expectation of (c1 - c2 X_{t2}) on {X_{t2} <= x2} from (t1, x1).

    The starting point (t1, x1) is a scalar; c1, c2, t2, x2 broadcast against
    each other, so one call prices a whole vector of right endpoints. Entries
    with t2 == t1 land in the degenerate branch (the pair tables give exact
    zero variance there).
    """
    _check_times(m, t1, t2)
    if not all(np.all(np.isfinite(v)) for v in (c1, c2, x1, x2)):
        raise ValueError("kernel inputs must be finite")
    t2 = np.asarray(t2, dtype=float)
    if t2.ndim == 0 and float(t2) == t1:
        return float((c1 - c2 * x1) * (1.0 if x1 <= x2 else 0.0))
    slope, offset, var = m.integrals().stats(t1, t2)
    nu = slope * x1 + offset
    disc = np.exp(-m.lam * (t2 - t1))
    return k_lambda_stats(c1, c2, nu, np.sqrt(var), x2, disc)
