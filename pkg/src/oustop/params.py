"""Time-dependent model coefficients.

A coefficient is a deterministic scalar function of time, used for the
mean-reversion speed theta, the pulling level alpha, and the volatility
sigma of the mean-reverting diffusion

    dX_s = theta(s) (alpha(s) - X_s) ds + sigma(s) dW_s.

Every coefficient belongs to one of a small set of closed-form families so
that model configurations can be serialized to JSON and reproduced exactly.
The serialized form is ``{"kind": "<family>", "params": [...]}``.

All families evaluate for any real t and are vectorized over numpy arrays;
the model layer owns the restriction to [0, T] and the positivity
requirements on theta and sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import ndtr

__all__ = [
    "ParamFn",
    "Constant",
    "Exponential",
    "Sinusoid",
    "Polynomial",
    "NormalCdfStep",
    "NormalPdfBump",
    "Sech",
    "CothCapped",
    "Tabulated",
    "from_spec",
    "evaluate",
    "check_positive",
    "check_finite",
]

_SQRT_2PI = np.sqrt(2.0 * np.pi)

# Dense sample count used for construction-time validation of a coefficient
# over a horizon (positivity / finiteness). Knots are always added on top.
VALIDATION_SAMPLES = 1001


def _match_input(t, values):
    """Return values with the same scalar/array shape as the input t."""
    if np.ndim(t) == 0:
        return float(values)
    return np.asarray(values, dtype=float)


class ParamFn:
    """Base class for time-dependent coefficients.

    Subclasses are immutable value objects: construction validates the
    coefficients, ``__call__`` evaluates (scalar in, scalar out; array in,
    array out), and ``to_spec`` serializes losslessly.
    """

    kind: str = ""

    def __call__(self, t):
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    def knots(self) -> tuple[float, ...]:
        """Times where the function loses smoothness (quadrature breakpoints)."""
        return ()


@dataclass(frozen=True)
class Constant(ParamFn):
    """f(t) = c."""

    c: float
    kind = "constant"

    def __post_init__(self):
        if not np.isfinite(self.c):
            raise ValueError("constant coefficient must be finite")

    def __call__(self, t):
        return _match_input(t, np.full(np.shape(t), float(self.c)))

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [float(self.c)]}


@dataclass(frozen=True)
class Exponential(ParamFn):
    """f(t) = a * exp(b t)."""

    a: float
    b: float
    kind = "exponential"

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("exponential coefficients must be finite")

    def __call__(self, t):
        return _match_input(t, self.a * np.exp(self.b * np.asarray(t, dtype=float)))

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [float(self.a), float(self.b)]}


@dataclass(frozen=True)
class Sinusoid(ParamFn):
    """f(t) = a * sin(2 pi omega t + phase) + offset."""

    a: float
    omega: float
    phase: float = 0.0
    offset: float = 0.0
    kind = "sinusoid"

    def __post_init__(self):
        vals = (self.a, self.omega, self.phase, self.offset)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("sinusoid coefficients must be finite")

    def __call__(self, t):
        arg = 2.0 * np.pi * self.omega * np.asarray(t, dtype=float) + self.phase
        return _match_input(t, self.a * np.sin(arg) + self.offset)

    def to_spec(self) -> dict:
        return {
            "kind": self.kind,
            "params": [float(self.a), float(self.omega), float(self.phase), float(self.offset)],
        }


@dataclass(frozen=True)
class Polynomial(ParamFn):
    """f(t) = sum_i coeffs[i] * t^i (ascending powers)."""

    coeffs: tuple[float, ...]
    kind = "polynomial"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(np.isfinite(c) for c in coeffs):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, t):
        v = np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), self.coeffs)
        return _match_input(t, v)

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [float(c) for c in self.coeffs]}


@dataclass(frozen=True)
class NormalCdfStep(ParamFn):
    """f(t) = a + b * Phi((t - m) / s): a smooth step from a to a + b around m."""

    a: float
    b: float
    m: float
    s: float
    kind = "normal_cdf_step"

    def __post_init__(self):
        vals = (self.a, self.b, self.m, self.s)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("step coefficients must be finite")
        if self.s <= 0:
            raise ValueError("step width s must be positive")

    def __call__(self, t):
        z = (np.asarray(t, dtype=float) - self.m) / self.s
        return _match_input(t, self.a + self.b * ndtr(z))

    def to_spec(self) -> dict:
        return {
            "kind": self.kind,
            "params": [float(self.a), float(self.b), float(self.m), float(self.s)],
        }


@dataclass(frozen=True)
class NormalPdfBump(ParamFn):
    """f(t) = a + b * phi((t - m) / s): a transient excursion around m.

    phi is the standard normal density, so the peak height is b / sqrt(2 pi)
    above the baseline a.
    """

    a: float
    b: float
    m: float
    s: float
    kind = "normal_pdf_bump"

    def __post_init__(self):
        vals = (self.a, self.b, self.m, self.s)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("bump coefficients must be finite")
        if self.s <= 0:
            raise ValueError("bump width s must be positive")

    def __call__(self, t):
        z = (np.asarray(t, dtype=float) - self.m) / self.s
        return _match_input(t, self.a + self.b * np.exp(-0.5 * z * z) / _SQRT_2PI)

    def to_spec(self) -> dict:
        return {
            "kind": self.kind,
            "params": [float(self.a), float(self.b), float(self.m), float(self.s)],
        }


@dataclass(frozen=True)
class Sech(ParamFn):
    """f(t) = a * sech(k (horizon - t)): ramps up to a as t approaches horizon."""

    a: float
    k: float
    horizon: float
    kind = "sech"

    def __post_init__(self):
        vals = (self.a, self.k, self.horizon)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("sech coefficients must be finite")

    def __call__(self, t):
        arg = self.k * (self.horizon - np.asarray(t, dtype=float))
        return _match_input(t, self.a / np.cosh(arg))

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [float(self.a), float(self.k), float(self.horizon)]}


@dataclass(frozen=True)
class CothCapped(ParamFn):
    """Capped version of f(t) = a * coth(a (horizon - t)).

    The uncapped function diverges like 1 / (horizon - t); past t = horizon - eps
    it is replaced by

        1 - exp(-a^2 (t - horizon + eps) / sinh^2(a eps)) + a coth(a eps),

    which matches the value and the slope of the capped branch at the joint,
    stays bounded, and keeps increasing toward its asymptote. Used to emulate
    boundary-pinning pulls with a controlled cap.
    """

    a: float
    horizon: float
    eps: float
    kind = "coth_capped"

    def __post_init__(self):
        vals = (self.a, self.horizon, self.eps)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("coth coefficients must be finite")
        if self.a <= 0:
            raise ValueError("coth scale a must be positive")
        if not (0 < self.eps < self.horizon):
            raise ValueError("cap offset eps must lie in (0, horizon)")
        # Value continuity at the joint is analytic; guard against a bad edit.
        joint = self.horizon - self.eps
        left = self.a / np.tanh(self.a * self.eps)
        right = self._cap(np.asarray(joint))
        if abs(left - float(right)) > 1e-8:
            raise ValueError("cap branch discontinuous at horizon - eps")

    def _cap(self, t):
        rate = self.a**2 / np.sinh(self.a * self.eps) ** 2
        base = self.a / np.tanh(self.a * self.eps)
        return 1.0 - np.exp(-rate * (t - (self.horizon - self.eps))) + base

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        capped = t_arr > self.horizon - self.eps
        # Evaluate coth only where it is safe; the capped branch elsewhere.
        safe = np.where(capped, self.horizon - self.eps, t_arr)
        out = self.a / np.tanh(self.a * (self.horizon - safe))
        out = np.where(capped, self._cap(t_arr), out)
        return _match_input(t, out)

    def knots(self) -> tuple[float, ...]:
        return (self.horizon - self.eps,)

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [float(self.a), float(self.horizon), float(self.eps)]}


@dataclass(frozen=True)
class Tabulated(ParamFn):
    """Piecewise-linear interpolation through (knot, value) pairs.

    Exact at the knots, affine between adjacent knots, and held constant
    beyond the first/last knot.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]
    _t: np.ndarray = field(init=False, repr=False, compare=False)
    _v: np.ndarray = field(init=False, repr=False, compare=False)
    kind = "tabulated"

    def __post_init__(self):
        times = tuple(float(x) for x in self.times)
        values = tuple(float(x) for x in self.values)
        if len(times) < 2:
            raise ValueError("tabulated coefficient needs at least two knots")
        if len(times) != len(values):
            raise ValueError("times and values must have equal length")
        if not all(np.isfinite(x) for x in times + values):
            raise ValueError("tabulated knots and values must be finite")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("tabulated knots must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_t", np.asarray(times))
        object.__setattr__(self, "_v", np.asarray(values))

    def __call__(self, t):
        return _match_input(t, np.interp(np.asarray(t, dtype=float), self._t, self._v))

    def knots(self) -> tuple[float, ...]:
        return self.times

    def to_spec(self) -> dict:
        return {"kind": self.kind, "params": [list(self.times), list(self.values)]}


_FAMILIES: dict[str, type] = {
    cls.kind: cls
    for cls in (
        Constant,
        Exponential,
        Sinusoid,
        Polynomial,
        NormalCdfStep,
        NormalPdfBump,
        Sech,
        CothCapped,
        Tabulated,
    )
}


def from_spec(spec: dict) -> ParamFn:
    """Rebuild a coefficient from its serialized ``{"kind", "params"}`` form."""
    if not isinstance(spec, dict) or "kind" not in spec or "params" not in spec:
        raise ValueError("coefficient spec must be a dict with 'kind' and 'params'")
    kind = spec["kind"]
    params = spec["params"]
    if kind not in _FAMILIES:
        known = ", ".join(sorted(_FAMILIES))
        raise ValueError(f"unknown coefficient kind {kind!r} (known: {known})")
    if not isinstance(params, (list, tuple)):
        raise ValueError(f"coefficient params for {kind!r} must be a list")
    cls = _FAMILIES[kind]
    try:
        if cls is Polynomial:
            return Polynomial(tuple(params))
        if cls is Tabulated:
            times, values = params
            return Tabulated(tuple(times), tuple(values))
        return cls(*params)
    except TypeError as exc:
        raise ValueError(f"bad parameter count for {kind!r}: {exc}") from exc


def evaluate(fn: ParamFn, t, t_max: float):
    """Evaluate fn at t, enforcing the model time domain [0, t_max]."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > t_max):
        raise ValueError(f"time outside [0, {t_max}]")
    return fn(t)


def _validation_grid(fn: ParamFn, t_max: float) -> np.ndarray:
    grid = np.linspace(0.0, t_max, VALIDATION_SAMPLES)
    interior = [k for k in fn.knots() if 0.0 <= k <= t_max]
    if interior:
        grid = np.union1d(grid, np.asarray(interior, dtype=float))
    return grid


def check_finite(fn: ParamFn, t_max: float, name: str = "coefficient") -> None:
    """Raise if fn takes non-finite values anywhere on a dense [0, t_max] grid."""
    vals = fn(_validation_grid(fn, t_max))
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"{name} must be finite on [0, {t_max}]")


def check_positive(fn: ParamFn, t_max: float, name: str = "coefficient") -> None:
    """Raise if fn is not strictly positive on a dense [0, t_max] grid plus knots."""
    vals = fn(_validation_grid(fn, t_max))
    if not np.all(np.isfinite(vals)):
        raise ValueError(f"{name} must be finite on [0, {t_max}]")
    if np.any(vals <= 0.0):
        worst = float(np.min(vals))
        raise ValueError(f"{name} must be strictly positive on [0, {t_max}] (min {worst:g})")
