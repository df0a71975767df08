"""Monte Carlo verification of boundaries and values.

Paths use the exact Gaussian transition law (no Euler bias), so any
disagreement with the closed-form value indicts the boundary or the value
assembly, not the path scheme. Paths are generated in fixed-size chunks;
chunk c of stream s draws from Philox keyed by SeedSequence(seed,
spawn_key=(s, c)). A path's randomness therefore depends only on (seed,
stream, path index): estimates reproduce bit-for-bit for a given config, the
first k paths are invariant under enlarging n_paths, and chunks may be farmed
out without changing the result.

Estimators assume they are handed the same model the boundary was solved on
(the solver works in unit-volatility time; callers apply the time change
before simulating). The transitions themselves are exact for any sigma.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import OUModel
from .solver import Boundary

_CHUNK = 8192

# stream namespaces: strategy/European share paths (their difference then has
# lower variance), LSMC fits and re-evaluates on two more
_STREAM_MAIN = 0
_STREAM_LSMC_FIT = 1
_STREAM_LSMC_EVAL = 2


@dataclass(frozen=True)
class MCConfig:
    """Simulation size and seeding."""

    n_paths: int = 100_000
    n_steps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    n_paths: int

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be non-negative")


def _check_start(m: OUModel, t0: float, x0: float) -> None:
    if not 0.0 <= t0 < m.T:
        raise ValueError(f"t0 must lie in [0, {m.T})")
    if not np.isfinite(x0):
        raise ValueError("x0 must be finite")


def _grid(m: OUModel, t0: float, cfg: MCConfig) -> np.ndarray:
    return np.linspace(t0, m.T, cfg.n_steps + 1)


def _step_stats(m: OUModel, times: np.ndarray):
    slope, offset, var = m.integrals().stats(times[:-1], times[1:])
    return slope, offset, np.sqrt(var)


def _rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    key = np.random.SeedSequence(seed, spawn_key=(stream, chunk))
    return np.random.Generator(np.random.Philox(key))


def _chunk_sizes(n_paths: int):
    start = 0
    while start < n_paths:
        yield min(_CHUNK, n_paths - start)
        start += _CHUNK


def _simulate_chunk(rng, x0, rows, slope, offset, sd) -> np.ndarray:
    z = rng.standard_normal((rows, len(slope)))
    out = np.empty((rows, len(slope) + 1))
    out[:, 0] = x0
    x = out[:, 0].copy()
    for k in range(len(slope)):
        x = slope[k] * x + offset[k] + sd[k] * z[:, k]
        out[:, k + 1] = x
    return out


def _iter_chunks(m, t0, x0, cfg, stream):
    times = _grid(m, t0, cfg)
    slope, offset, sd = _step_stats(m, times)
    for c, rows in enumerate(_chunk_sizes(cfg.n_paths)):
        yield _simulate_chunk(_rng(cfg.seed, stream, c), x0, rows, slope, offset, sd)


def simulate_paths(m: OUModel, t0: float, x0: float, cfg: MCConfig):
    """Exact-transition ensemble on the equispaced grid of [t0, T].

    Returns (times, paths) with paths of shape (n_paths, n_steps + 1); the
    full matrix is materialized, which at the defaults is ~0.8 GB, so large
    configs are better consumed through the estimator functions (they stream
    the same chunks). X_{s+dt} = slope X_s + offset + sd Z with the Gaussian
    one-step moments, so sampled marginals match the transition law exactly.
    """
    _check_start(m, t0, x0)
    times = _grid(m, t0, cfg)
    paths = np.empty((cfg.n_paths, cfg.n_steps + 1))
    start = 0
    for chunk in _iter_chunks(m, t0, x0, cfg, _STREAM_MAIN):
        paths[start : start + chunk.shape[0]] = chunk
        start += chunk.shape[0]
    return times, paths


def _summarize(total: float, total_sq: float, n: int) -> MCResult:
    mean = total / n
    if n > 1:
        var = max(total_sq - n * mean * mean, 0.0) / (n - 1)
        stderr = float(np.sqrt(var / n))
    else:
        stderr = 0.0
    return MCResult(mean=float(mean), stderr=stderr, n_paths=n)


def boundary_strategy_value(
    m: OUModel, b: Boundary, t0: float, x0: float, cfg: MCConfig
) -> MCResult:
    """Value of the stopping rule "exercise at the first grid time X <= b".

    The rule is checked at t0 itself and, failing everything else, at T,
    where the put is exercised regardless; payoff e^{-lam tau}(A - X)^+.
    Grid-time crossing checks bias the estimate slightly downward.
    """
    _check_start(m, t0, x0)
    times = _grid(m, t0, cfg)
    levels = b(times)
    total = total_sq = 0.0
    n = 0
    for chunk in _iter_chunks(m, t0, x0, cfg, _STREAM_MAIN):
        hits = chunk <= levels[None, :]
        hits[:, -1] = True
        idx = np.argmax(hits, axis=1)
        x_stop = chunk[np.arange(chunk.shape[0]), idx]
        pay = np.exp(-m.lam * (times[idx] - t0)) * np.maximum(m.strike - x_stop, 0.0)
        total += float(pay.sum())
        total_sq += float((pay * pay).sum())
        n += chunk.shape[0]
    return _summarize(total, total_sq, n)


def call_strategy_value(
    m: OUModel, b: Boundary, t0: float, x0: float, cfg: MCConfig
) -> MCResult:
    """Call twin of boundary_strategy_value: stop when X >= b, payoff (X - A)^+.

    Used with the reflected model and the reflected boundary 2A - b_put; see
    put_call_transform.
    """
    _check_start(m, t0, x0)
    times = _grid(m, t0, cfg)
    levels = b(times)
    total = total_sq = 0.0
    n = 0
    for chunk in _iter_chunks(m, t0, x0, cfg, _STREAM_MAIN):
        hits = chunk >= levels[None, :]
        hits[:, -1] = True
        idx = np.argmax(hits, axis=1)
        x_stop = chunk[np.arange(chunk.shape[0]), idx]
        pay = np.exp(-m.lam * (times[idx] - t0)) * np.maximum(x_stop - m.strike, 0.0)
        total += float(pay.sum())
        total_sq += float((pay * pay).sum())
        n += chunk.shape[0]
    return _summarize(total, total_sq, n)


def european_mc(m: OUModel, t0: float, x0: float, cfg: MCConfig) -> MCResult:
    """Plain discounted terminal payoff e^{-lam (T - t0)} (A - X_T)^+."""
    _check_start(m, t0, x0)
    times = _grid(m, t0, cfg)
    slope, offset, sd = _step_stats(m, times)
    disc = np.exp(-m.lam * (m.T - t0))
    total = total_sq = 0.0
    n = 0
    for c, rows in enumerate(_chunk_sizes(cfg.n_paths)):
        z = _rng(cfg.seed, _STREAM_MAIN, c).standard_normal((rows, cfg.n_steps))
        x = np.full(rows, float(x0))
        for k in range(cfg.n_steps):
            x = slope[k] * x + offset[k] + sd[k] * z[:, k]
        pay = disc * np.maximum(m.strike - x, 0.0)
        total += float(pay.sum())
        total_sq += float((pay * pay).sum())
        n += rows
    return _summarize(total, total_sq, n)


def _basis(x: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones_like(x), x, x * x, x * x * x])


def lsmc_value(m: OUModel, t0: float, x0: float, cfg: MCConfig) -> MCResult:
    """Least-squares Monte Carlo baseline, low-biased by construction.

    Phase one fits, per decision time, a cubic-polynomial continuation value
    by regressing realized discounted cashflows on in-the-money paths (steps
    where every path is out of the money fit nothing and the rule just
    continues there). Phase two freezes those rules and re-prices them on an
    independent stream, so the returned estimate is a genuine lower bound up
    to its stderr. The decision at t0 compares the immediate gain against the
    plain sample-mean continuation (all paths share x0, so a regression would
    be degenerate there).

    Phase one holds the full (n_paths, n_steps + 1) matrix in memory; callers
    with big path counts should cap n_steps accordingly.
    """
    _check_start(m, t0, x0)
    times = _grid(m, t0, cfg)
    slope, offset, sd = _step_stats(m, times)
    n, steps = cfg.n_paths, cfg.n_steps

    paths = np.empty((n, steps + 1))
    start = 0
    for c, rows in enumerate(_chunk_sizes(n)):
        paths[start : start + rows] = _simulate_chunk(
            _rng(cfg.seed, _STREAM_LSMC_FIT, c), x0, rows, slope, offset, sd
        )
        start += rows

    gain = m.strike - paths
    cash = np.maximum(gain[:, -1], 0.0)
    ex_step = np.full(n, steps)
    coeffs: list[np.ndarray | None] = [None] * steps
    for k in range(steps - 1, 0, -1):
        itm = gain[:, k] > 0.0
        if not itm.any():
            continue
        y = cash[itm] * np.exp(-m.lam * (times[ex_step[itm]] - times[k]))
        design = _basis(paths[itm, k])
        c_k = np.linalg.lstsq(design, y, rcond=None)[0]
        exercise = gain[itm, k] >= design @ c_k
        rows = np.where(itm)[0][exercise]
        cash[rows] = gain[rows, k]
        ex_step[rows] = k
        coeffs[k] = c_k

    continuation0 = float(
        np.mean(cash * np.exp(-m.lam * (times[ex_step] - t0)))
    )
    gain0 = max(m.strike - x0, 0.0)
    if gain0 > continuation0:
        # the rule stops every path at t0; nothing stochastic remains
        return MCResult(mean=gain0, stderr=0.0, n_paths=n)

    total = total_sq = 0.0
    priced = 0
    for c, rows in enumerate(_chunk_sizes(n)):
        chunk = _simulate_chunk(
            _rng(cfg.seed, _STREAM_LSMC_EVAL, c), x0, rows, slope, offset, sd
        )
        pay = np.exp(-m.lam * (m.T - t0)) * np.maximum(m.strike - chunk[:, -1], 0.0)
        stopped = np.zeros(rows, dtype=bool)
        for k in range(1, steps):
            c_k = coeffs[k]
            if c_k is None:
                continue
            g_k = m.strike - chunk[:, k]
            live = ~stopped & (g_k > 0.0)
            if not live.any():
                continue
            exercise = g_k[live] >= _basis(chunk[live, k]) @ c_k
            rows_k = np.where(live)[0][exercise]
            pay[rows_k] = g_k[rows_k] * np.exp(-m.lam * (times[k] - t0))
            stopped[rows_k] = True
        total += float(pay.sum())
        total_sq += float((pay * pay).sum())
        priced += rows
    return _summarize(total, total_sq, priced)
