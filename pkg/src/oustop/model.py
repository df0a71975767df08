"""Time-dependent mean-reverting model and its Gaussian transition law.

The state follows

    dX_s = theta(s) (alpha(s) - X_s) ds + sigma(s) dW_s,    0 <= s <= T,

with theta > 0 (mean-reversion speed), alpha the pulling level, sigma > 0
the volatility, all deterministic functions of time. Conditional on
X_{t1} = x the state at t2 >= t1 is Gaussian with

    mean(t1, x, t2) = e^{-I(t1,t2)} x + int_{t1}^{t2} e^{-I(r,t2)} theta(r) alpha(r) dr,
    var(t1, t2)     = int_{t1}^{t2} e^{-2 I(r,t2)} sigma(r)^2 dr,

where I(a, b) = int_a^b theta(u) du. The optimal-stopping machinery in the
rest of the package assumes the unit-volatility form sigma == 1; a model
with general sigma is brought to that form by the deterministic time change

    s~ = h~(t) = int_0^t sigma(u)^2 du,

under which X~_{s~} = X_{h(s~)} solves the unit-volatility equation with
theta~(s~) = theta(h(s~)) / sigma(h(s~))^2 and alpha~(s~) = alpha(h(s~)),
where h is the inverse clock. Boundaries computed on the changed clock pull
back through b(t) = b~(h~(t)).

The option written on the state is a put with strike ``strike`` and constant
discount rate ``lam``; both enter the exercise machinery, not the dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import params as pf
from ._quad import CoefficientIntegrals, CumulativeIntegral

__all__ = [
    "OUModel",
    "TransitionStats",
    "TimeChangedModel",
    "transition_mean",
    "transition_var",
    "transition_stats",
    "gamma_bound",
    "terminal_boundary",
    "to_unit_volatility",
    "pull_back_boundary",
]

# Tolerance for detecting the unit-volatility form on the validation grid.
_UNIT_SIGMA_TOL = 1e-12


@dataclass
class OUModel:
    """Model parameters: dynamics (theta, alpha, sigma, T) and option (lam, strike)."""

    theta: pf.ParamFn
    alpha: pf.ParamFn
    sigma: pf.ParamFn
    T: float
    lam: float = 0.0
    strike: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError("horizon T must be positive and finite")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValueError("discount rate lam must be >= 0")
        if not np.isfinite(self.strike):
            raise ValueError("strike must be finite")
        pf.check_positive(self.theta, self.T, "theta")
        pf.check_finite(self.alpha, self.T, "alpha")
        pf.check_positive(self.sigma, self.T, "sigma")
        sig = self.sigma(np.linspace(0.0, self.T, pf.VALIDATION_SAMPLES))
        self._unit_sigma = bool(np.all(np.abs(sig - 1.0) <= _UNIT_SIGMA_TOL))
        self._integrals: CoefficientIntegrals | None = None

    @property
    def unit_volatility(self) -> bool:
        return self._unit_sigma

    def knots(self) -> tuple[float, ...]:
        ks = set(self.theta.knots()) | set(self.alpha.knots()) | set(self.sigma.knots())
        return tuple(sorted(k for k in ks if 0.0 < k < self.T))

    def integrals(self) -> CoefficientIntegrals:
        """Shared cumulative-integral engine; built once, then read-only."""
        if self._integrals is None:
            self._integrals = CoefficientIntegrals(
                self.theta, self.alpha, self.sigma, self.T, self.knots()
            )
        return self._integrals


@dataclass(frozen=True)
class TransitionStats:
    """Conditional mean and variance of X_{t2} given X_{t1} = x."""

    mean: float
    var: float

    def __post_init__(self):
        if self.var < 0:
            raise ValueError("variance must be non-negative")


def _check_times(m: OUModel, t1, t2) -> None:
    if not (np.all(np.isfinite(t1)) and np.all(np.isfinite(t2))):
        raise ValueError("times must be finite")
    if np.any(np.less(t2, t1)):
        raise ValueError(f"t2 must be >= t1 (got t1={t1}, t2={t2})")
    if np.any(np.less(t1, 0)) or np.any(np.greater(t2, m.T)):
        raise ValueError(f"times must lie in [0, {m.T}]")


def transition_stats(m: OUModel, t1: float, x: float, t2: float) -> TransitionStats:
    """Gaussian transition moments between t1 and t2; (x, 0) exactly at t1 == t2."""
    _check_times(m, t1, t2)
    if not np.isfinite(x):
        raise ValueError("state x must be finite")
    if t2 == t1:
        return TransitionStats(mean=float(x), var=0.0)
    slope, offset, var = m.integrals().stats(t1, t2)
    return TransitionStats(mean=float(slope * x + offset), var=float(var))


def transition_mean(m: OUModel, t1: float, x: float, t2: float) -> float:
    return transition_stats(m, t1, x, t2).mean


def transition_var(m: OUModel, t1: float, t2: float) -> float:
    return transition_stats(m, t1, 0.0, t2).var


def gamma_bound(m: OUModel, t):
    """Upper bound for the exercise boundary: (theta a + lam K) / (theta + lam).

    A weighted average of the pulling level and the strike. The optimal
    boundary never exceeds it, and at t = T it gives the terminal limit
    min(strike, gamma_bound(T)).
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > m.T):
        raise ValueError(f"times must lie in [0, {m.T}]")
    th = np.asarray(m.theta(t_arr), dtype=float)
    al = np.asarray(m.alpha(t_arr), dtype=float)
    out = (th * al + m.lam * m.strike) / (th + m.lam)
    return float(out) if np.ndim(t) == 0 else out


def terminal_boundary(m: OUModel) -> float:
    """Boundary value at expiry: min(strike, gamma_bound(T))."""
    return min(m.strike, gamma_bound(m, m.T))


class _ReclockedFn(pf.ParamFn):
    """Coefficient read on the integrated-variance clock (internal plumbing).

    Evaluates base(h(s)), optionally divided by sigma(h(s))^2, where h is the
    inverse clock. Not serializable: reclocked models are derived objects,
    re-derivable from the outer model's config.
    """

    kind = "_reclocked"

    def __init__(self, base, invert, mapped_knots=(), divide_by_sigma_sq=None):
        self._base = base
        self._invert = invert
        self._knots = tuple(mapped_knots)
        self._div = divide_by_sigma_sq

    def __call__(self, s):
        t = self._invert(np.asarray(s, dtype=float))
        out = np.asarray(self._base(t), dtype=float)
        if self._div is not None:
            out = out / np.asarray(self._div(t), dtype=float) ** 2
        return float(out) if np.ndim(s) == 0 else out

    def knots(self) -> tuple[float, ...]:
        return self._knots


def _invert_monotone(value: Callable, t_max: float, tol: float = 1e-12) -> Callable:
    """Inverse of an increasing map [0, t_max] -> [0, value(t_max)] by bisection."""
    n_iter = int(np.ceil(np.log2(max(t_max / tol, 2.0)))) + 2

    def invert(s):
        s = np.asarray(s, dtype=float)
        lo = np.zeros_like(s)
        hi = np.full_like(s, t_max)
        for _ in range(n_iter):
            mid = 0.5 * (lo + hi)
            below = value(mid) < s
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    return invert


@dataclass
class TimeChangedModel:
    """A model together with its unit-volatility reformulation.

    ``inner`` has sigma == 1 on the clock s~ = h~(t); ``T_tilde`` is the
    changed horizon h~(T). When the outer model already has unit volatility
    the transform is the identity and ``inner is outer``.
    """

    outer: OUModel
    inner: OUModel
    T_tilde: float
    _clock: CumulativeIntegral | None = field(default=None, repr=False)
    _invert: Callable | None = field(default=None, repr=False)

    @property
    def identity(self) -> bool:
        return self._clock is None

    def h_tilde(self, t):
        """Changed time h~(t) = int_0^t sigma^2."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or np.any(t_arr > self.outer.T):
            raise ValueError(f"times must lie in [0, {self.outer.T}]")
        if self.identity:
            return float(t_arr) if np.ndim(t) == 0 else t_arr + 0.0
        out = self._clock.value(t_arr)
        return float(out) if np.ndim(t) == 0 else out

    def h(self, s):
        """Inverse clock: original time at changed time s."""
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < -1e-12) or np.any(s_arr > self.T_tilde * (1 + 1e-12) + 1e-12):
            raise ValueError(f"changed times must lie in [0, {self.T_tilde}]")
        if self.identity:
            return float(s_arr) if np.ndim(s) == 0 else s_arr + 0.0
        out = self._invert(np.clip(s_arr, 0.0, self.T_tilde))
        # h(0) = 0 and h(T~) = T hold by construction; pin them past the
        # bisection tolerance so round trips keep the horizon exact
        out = np.where(s_arr <= 0.0, 0.0, out)
        out = np.where(s_arr >= self.T_tilde, self.outer.T, out)
        return float(out) if np.ndim(s) == 0 else out


def to_unit_volatility(m: OUModel) -> TimeChangedModel:
    """Bring a model to unit-volatility form via the integrated-variance clock.

    Identity when sigma == 1 already. Otherwise the inner model carries
    theta~(s) = theta(h(s)) / sigma(h(s))^2 and alpha~(s) = alpha(h(s)) on the
    horizon T~ = h~(T); discount rate and strike carry over unchanged.
    """
    if m.unit_volatility:
        return TimeChangedModel(outer=m, inner=m, T_tilde=m.T)

    sigma = m.sigma
    clock = CumulativeIntegral(
        lambda t: np.asarray(sigma(t), dtype=float) ** 2, m.T, sigma.knots()
    )
    t_tilde = float(clock.value(np.asarray(m.T)))
    invert = _invert_monotone(clock.value, m.T)

    def mapped(base: pf.ParamFn, extra: pf.ParamFn | None = None) -> tuple[float, ...]:
        ks = set(base.knots())
        if extra is not None:
            ks |= set(extra.knots())
        inside = sorted(k for k in ks if 0.0 < k < m.T)
        return tuple(float(clock.value(np.asarray(k))) for k in inside)

    theta_tilde = _ReclockedFn(m.theta, invert, mapped(m.theta, m.sigma), m.sigma)
    alpha_tilde = _ReclockedFn(m.alpha, invert, mapped(m.alpha))
    inner = OUModel(
        theta=theta_tilde,
        alpha=alpha_tilde,
        sigma=pf.Constant(1.0),
        T=t_tilde,
        lam=m.lam,
        strike=m.strike,
    )
    return TimeChangedModel(outer=m, inner=inner, T_tilde=t_tilde, _clock=clock, _invert=invert)


def pull_back_boundary(tc: TimeChangedModel, b_tilde: Callable) -> Callable:
    """Boundary on the original clock: t -> b~(h~(t))."""

    def boundary(t):
        return b_tilde(tc.h_tilde(t))

    return boundary
