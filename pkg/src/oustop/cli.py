"""Command line front end for the optimal stopping solver.

Subcommands:

* ``boundary``  solve the free boundary for one config, write ``boundary.csv``
  (nodes, boundary, upper bound, strike) and ``errors.csv`` (per-sweep step
  sizes d_k).
* ``value``     tabulate the option value on a (t, x) grid using the solved
  boundary, write ``value.csv``.
* ``mc-check``  compare the closed-form value against Monte Carlo estimators
  (stopping at the boundary, least-squares Monte Carlo, European) and report
  PASS/FAIL per comparison at three standard errors.
* ``scenario``  run a named preset family (several related configs), write the
  per-member CSVs plus ``manifest.json`` describing how they group into
  panels. A separate plotting tool can consume the manifest.

Configs are JSON files; anywhere a config path is accepted a preset name
(see ``oustop scenario --help``) works as well. Volatility is allowed to be
non-unit: the solve then runs on the unit-volatility reformulation and the
output times are mapped back to the original clock.

Exit codes: 0 success, 1 bad config or arguments, 2 solver did not converge,
3 a Monte Carlo consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import mc as mc_
from . import presets, valuation
from .model import OUModel, TimeChangedModel, gamma_bound, to_unit_volatility
from .params import from_spec
from .solver import (
    Boundary,
    NodeConvergenceError,
    SolverConfig,
    SolverReport,
    backward_induction_solve,
    picard_solve,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CHECK_FAILED = 3

_ALPHA_GRID_POINTS = 401
# LSMC regresses on materialized path matrices; past ~250 steps the memory and
# fit cost buy no accuracy at these path counts, so the step count is capped
_LSMC_MAX_STEPS = 250


class ConfigError(Exception):
    """Bad config or command line input; message is ready for the user."""


# ---------------------------------------------------------------------------
# config loading


def _key_line(text: str | None, key: str) -> int | None:
    """Line number of the first occurrence of "key" in the raw JSON text."""
    if text is None:
        return None
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def _fail(source: str, text: str | None, key: str | None, msg: str):
    line = _key_line(text, key) if key else None
    where = f"{source}:{line}" if line is not None else source
    raise ConfigError(f"{where}: {msg}")


def load_config(arg: str) -> tuple[dict, str, str | None]:
    """Resolve a --config argument to (config dict, source label, raw text).

    The argument is first matched against the preset names, then treated as a
    file path. Raw text is kept so later validation errors can point at the
    line where the offending key appears.
    """
    if arg in presets.PRESET_NAMES:
        return presets.base_config(arg), f"preset {arg}", None
    if not os.path.exists(arg):
        known = ", ".join(presets.PRESET_NAMES)
        raise ConfigError(f"{arg}: no such config file or preset (presets: {known})")
    with open(arg, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{arg}:{exc.lineno}: {exc.msg}")
    if not isinstance(cfg, dict):
        raise ConfigError(f"{arg}:1: top level must be a JSON object")
    for key in cfg:
        if key not in ("model", "solver", "mc", "grid", "outputs"):
            _fail(arg, text, key, f"unknown section {key!r}")
    return cfg, arg, text


def _require_number(section: dict, key: str, source: str, text: str | None, default=None):
    if key not in section:
        if default is not None:
            return default
        _fail(source, text, None, f"missing required model field {key!r}")
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        _fail(source, text, key, f"{key!r} must be a finite number, got {v!r}")
    return float(v)


def build_model(cfg: dict, source: str, text: str | None) -> OUModel:
    if "model" not in cfg or not isinstance(cfg["model"], dict):
        _fail(source, text, "model", "config needs a 'model' object")
    section = cfg["model"]
    for key in section:
        if key not in ("theta", "alpha", "sigma", "T", "lam", "strike"):
            _fail(source, text, key, f"unknown model field {key!r}")
    coeff = {}
    for key in ("theta", "alpha", "sigma"):
        if key not in section:
            _fail(source, text, "model", f"model is missing {key!r}")
        try:
            coeff[key] = from_spec(section[key])
        except (ValueError, TypeError) as exc:
            _fail(source, text, key, f"bad {key}: {exc}")
    horizon = _require_number(section, "T", source, text)
    lam = _require_number(section, "lam", source, text, default=0.0)
    strike = _require_number(section, "strike", source, text, default=0.0)
    try:
        return OUModel(coeff["theta"], coeff["alpha"], coeff["sigma"],
                       T=horizon, lam=lam, strike=strike)
    except ValueError as exc:
        _fail(source, text, "model", str(exc))


def build_solver_config(cfg: dict, args, source: str, text: str | None) -> SolverConfig:
    section = cfg.get("solver", {})
    if not isinstance(section, dict):
        _fail(source, text, "solver", "'solver' must be an object")
    for key in section:
        if key not in ("N", "delta", "max_iter", "clamp_low"):
            _fail(source, text, key, f"unknown solver field {key!r}")
    merged = dict(section)
    if getattr(args, "N", None) is not None:
        merged["N"] = args.N
    if getattr(args, "delta", None) is not None:
        merged["delta"] = args.delta
    if getattr(args, "max_iter", None) is not None:
        merged["max_iter"] = args.max_iter
    try:
        return SolverConfig(**merged)
    except (TypeError, ValueError) as exc:
        _fail(source, text, "solver", str(exc))


def build_mc_config(cfg: dict, args, source: str, text: str | None) -> mc_.MCConfig:
    section = cfg.get("mc", {})
    if not isinstance(section, dict):
        _fail(source, text, "mc", "'mc' must be an object")
    for key in section:
        if key not in ("n_paths", "n_steps", "seed"):
            _fail(source, text, key, f"unknown mc field {key!r}")
    merged = dict(section)
    if getattr(args, "paths", None) is not None:
        merged["n_paths"] = args.paths
    if getattr(args, "steps", None) is not None:
        merged["n_steps"] = args.steps
    if getattr(args, "seed", None) is not None:
        merged["seed"] = args.seed
    try:
        return mc_.MCConfig(**merged)
    except (TypeError, ValueError) as exc:
        _fail(source, text, "mc", str(exc))


def _resolved_config(cfg: dict, args) -> dict:
    """The config as actually run, CLI overrides folded in."""
    out = json.loads(json.dumps(cfg))
    solver = out.setdefault("solver", {})
    for key, val in (("N", getattr(args, "N", None)),
                     ("delta", getattr(args, "delta", None)),
                     ("max_iter", getattr(args, "max_iter", None))):
        if val is not None:
            solver[key] = val
    mc_sec = out.setdefault("mc", {})
    for key, val in (("n_paths", getattr(args, "paths", None)),
                     ("n_steps", getattr(args, "steps", None)),
                     ("seed", getattr(args, "seed", None))):
        if val is not None:
            mc_sec[key] = val
    return out


# ---------------------------------------------------------------------------
# solving and output helpers


def _solve(model: OUModel, scfg: SolverConfig, method: str) -> tuple[TimeChangedModel, SolverReport]:
    """Solve on the unit-volatility form of the model."""
    tc = to_unit_volatility(model)
    solve = picard_solve if method == "picard" else backward_induction_solve
    return tc, solve(tc.inner, scfg)


def _fmt(v) -> str:
    return repr(float(v))


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _ensure_outdir(args, cfg: dict) -> str:
    out = args.out or cfg.get("outputs") or "out"
    if not isinstance(out, str):
        raise ConfigError(f"'outputs' must be a string, got {out!r}")
    os.makedirs(out, exist_ok=True)
    return out


def _boundary_rows(tc: TimeChangedModel, report: SolverReport, strike: float):
    nodes = report.boundary.mesh.nodes
    t_out = tc.h(nodes)
    bound = gamma_bound(tc.inner, nodes)
    for t, b, g in zip(t_out, report.boundary.values, bound):
        yield [_fmt(t), _fmt(b), _fmt(g), _fmt(strike)]


def _error_rows(report: SolverReport):
    for k, d in enumerate(report.errors, start=1):
        log10 = math.log10(d) if d > 0 else float("-inf")
        yield [str(k), _fmt(d), _fmt(log10)]


def _write_boundary_outputs(outdir: str, prefix: str, tc: TimeChangedModel,
                            report: SolverReport, strike: float) -> tuple[str, str]:
    bpath = os.path.join(outdir, f"{prefix}boundary.csv")
    epath = os.path.join(outdir, f"{prefix}errors.csv")
    _write_csv(bpath, ["t", "boundary", "gamma_bound", "strike"],
               _boundary_rows(tc, report, strike))
    _write_csv(epath, ["k", "d_k", "log10_d_k"], _error_rows(report))
    return bpath, epath


# ---------------------------------------------------------------------------
# subcommands


def cmd_boundary(args) -> int:
    cfg, source, text = load_config(args.config)
    if args.dump_config:
        print(json.dumps(_resolved_config(cfg, args), indent=2))
        return EXIT_OK
    model = build_model(cfg, source, text)
    scfg = build_solver_config(cfg, args, source, text)
    tc, report = _solve(model, scfg, args.solver)
    outdir = _ensure_outdir(args, cfg)
    bpath, epath = _write_boundary_outputs(outdir, "", tc, report, model.strike)
    status = "converged" if report.converged else "NOT CONVERGED"
    print(f"{source}: {args.solver} solve, N={scfg.N}, "
          f"{report.iterations} iterations, {status}")
    print(f"wrote {bpath}")
    print(f"wrote {epath}")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _value_grid(cfg: dict, model: OUModel, boundary: Boundary,
                source: str, text: str | None):
    section = cfg.get("grid", {})
    if not isinstance(section, dict):
        _fail(source, text, "grid", "'grid' must be an object")
    for key in section:
        if key not in ("t", "x"):
            _fail(source, text, key, f"unknown grid field {key!r}")

    def _axis(key, default):
        vals = section.get(key)
        if vals is None:
            return default
        if (not isinstance(vals, list) or not vals
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           and math.isfinite(v) for v in vals)):
            _fail(source, text, key, f"grid {key!r} must be a list of finite numbers")
        return [float(v) for v in vals]

    ts = _axis("t", [model.T * f for f in (0.0, 0.25, 0.5, 0.75, 1.0)])
    lo = float(np.min(boundary.values)) - 1.0
    xs = _axis("x", list(np.linspace(lo, model.strike + 1.0, 9)))
    for t in ts:
        if not 0.0 <= t <= model.T:
            _fail(source, text, "t", f"grid time {t!r} outside [0, {model.T}]")
    return ts, xs


def cmd_value(args) -> int:
    cfg, source, text = load_config(args.config)
    if args.dump_config:
        print(json.dumps(_resolved_config(cfg, args), indent=2))
        return EXIT_OK
    model = build_model(cfg, source, text)
    scfg = build_solver_config(cfg, args, source, text)
    tc, report = _solve(model, scfg, args.solver)
    ts, xs = _value_grid(cfg, model, report.boundary, source, text)
    rows = []
    for t in ts:
        s = tc.h_tilde(t)
        for x in xs:
            vp = valuation.value(tc.inner, report.boundary, s, x)
            rows.append([_fmt(t), _fmt(x), _fmt(vp.V), _fmt(vp.european),
                         _fmt(vp.premium), _fmt(vp.gain),
                         "true" if vp.in_stopping_region else "false"])
    outdir = _ensure_outdir(args, cfg)
    vpath = os.path.join(outdir, "value.csv")
    _write_csv(vpath, ["t", "x", "value", "european", "premium", "gain",
                       "in_stopping_region"], rows)
    print(f"{source}: {len(ts)}x{len(xs)} value grid "
          f"({'converged' if report.converged else 'NOT CONVERGED'})")
    print(f"wrote {vpath}")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _default_points(model: OUModel) -> list[tuple[float, float]]:
    return [(0.0, model.strike),
            (0.0, model.strike + 0.5),
            (0.5 * model.T, model.strike + 0.25)]


def cmd_mc_check(args) -> int:
    cfg, source, text = load_config(args.config)
    if args.dump_config:
        print(json.dumps(_resolved_config(cfg, args), indent=2))
        return EXIT_OK
    model = build_model(cfg, source, text)
    scfg = build_solver_config(cfg, args, source, text)
    mcfg = build_mc_config(cfg, args, source, text)
    tc, report = _solve(model, scfg, args.solver)
    if not report.converged:
        print(f"{source}: solver did not converge, not running MC", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    inner = tc.inner
    boundary = report.boundary
    strategy_boundary = boundary
    if args.perturb:
        strategy_boundary = Boundary(boundary.mesh, boundary.values + args.perturb)
        print(f"note: stopping strategy uses the boundary shifted by {args.perturb:+g}")
    lsmc_cfg = mc_.MCConfig(n_paths=mcfg.n_paths,
                            n_steps=min(mcfg.n_steps, _LSMC_MAX_STEPS),
                            seed=mcfg.seed)

    rows = []
    failures = 0
    checks = 0

    def check(t0, x0, label, ok, detail):
        nonlocal failures, checks
        checks += 1
        failures += 0 if ok else 1
        print(f"[{'PASS' if ok else 'FAIL'}] (t={t0:g}, x={x0:g}) {label}: {detail}")

    for t0, x0 in _default_points(inner):
        vp = valuation.value(inner, boundary, t0, x0)
        strat = mc_.boundary_strategy_value(inner, strategy_boundary, t0, x0, mcfg)
        ls = mc_.lsmc_value(inner, t0, x0, lsmc_cfg)
        euro = valuation.european_term(inner, t0, x0)
        euro_mc = mc_.european_mc(inner, t0, x0, mcfg)
        rows.extend([
            [_fmt(t0), _fmt(x0), "value", _fmt(vp.V), ""],
            [_fmt(t0), _fmt(x0), "strategy_mc", _fmt(strat.mean), _fmt(strat.stderr)],
            [_fmt(t0), _fmt(x0), "lsmc", _fmt(ls.mean), _fmt(ls.stderr)],
            [_fmt(t0), _fmt(x0), "european", _fmt(euro), ""],
            [_fmt(t0), _fmt(x0), "european_mc", _fmt(euro_mc.mean), _fmt(euro_mc.stderr)],
        ])

        tol = 3.0 * strat.stderr
        check(t0, x0, "value vs boundary-strategy MC",
              abs(vp.V - strat.mean) <= tol,
              f"|{vp.V:.6f} - {strat.mean:.6f}| vs 3se = {tol:.6f}")
        se = 3.0 * math.hypot(strat.stderr, ls.stderr)
        check(t0, x0, "strategy dominates LSMC",
              strat.mean >= ls.mean - se,
              f"{strat.mean:.6f} >= {ls.mean:.6f} - {se:.6f}")
        se = 3.0 * math.hypot(strat.stderr, euro_mc.stderr)
        check(t0, x0, "strategy dominates European",
              strat.mean >= euro_mc.mean - se,
              f"{strat.mean:.6f} >= {euro_mc.mean:.6f} - {se:.6f}")
        check(t0, x0, "European closed form vs MC",
              abs(euro - euro_mc.mean) <= 3.0 * euro_mc.stderr,
              f"|{euro:.6f} - {euro_mc.mean:.6f}| vs 3se = {3.0 * euro_mc.stderr:.6f}")

    outdir = _ensure_outdir(args, cfg)
    mpath = os.path.join(outdir, "mc.csv")
    _write_csv(mpath, ["t", "x", "method", "estimate", "stderr"], rows)
    print(f"wrote {mpath}")
    print(f"mc-check: {checks - failures}/{checks} comparisons passed")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


# --- scenario ---------------------------------------------------------------


def _scenario_worker(job: tuple[str, dict, dict, str]) -> dict:
    """Solve one preset member; returns plain lists so it can cross processes."""
    slug, cfg, overrides, method = job
    model = build_model(cfg, f"member {slug}", None)
    merged = dict(cfg.get("solver", {}))
    merged.update(overrides)
    scfg = SolverConfig(**merged)
    try:
        tc, report = _solve(model, scfg, method)
    except NodeConvergenceError as exc:
        return {"slug": slug, "failed": str(exc)}
    nodes = report.boundary.mesh.nodes
    return {
        "slug": slug,
        "t": [float(v) for v in tc.h(nodes)],
        "boundary": [float(v) for v in report.boundary.values],
        "gamma_bound": [float(v) for v in gamma_bound(tc.inner, nodes)],
        "errors": [float(v) for v in report.errors],
        "converged": bool(report.converged),
        "iterations": int(report.iterations),
    }


def _worker_count(n_jobs: int) -> int:
    raw = os.environ.get("OSB_OU_THREADS")
    if raw is None:
        return min(n_jobs, os.cpu_count() or 1)
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"OSB_OU_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ConfigError(f"OSB_OU_THREADS must be >= 1, got {cap}")
    return min(n_jobs, cap)


def _reference_rows(ref: dict, model: OUModel):
    if ref["curve"] != "bb_sqrt":
        raise ConfigError(f"unknown reference curve {ref['curve']!r}")
    ts = np.linspace(0.0, model.T, _ALPHA_GRID_POINTS)
    vals = model.strike - presets.BB_COEFFICIENT * np.sqrt(model.T - ts)
    return (( _fmt(t), _fmt(v)) for t, v in zip(ts, vals))


def cmd_scenario(args) -> int:
    try:
        scenario = presets.scenario(args.name)
    except KeyError:
        known = ", ".join(presets.PRESET_NAMES)
        raise ConfigError(f"unknown preset {args.name!r} (presets: {known})")
    overrides = {}
    if args.N is not None:
        overrides["N"] = args.N
    if args.delta is not None:
        overrides["delta"] = args.delta
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    if args.dump_config:
        dumped = json.loads(json.dumps(scenario))
        for panel in dumped["panels"]:
            for member in panel["members"]:
                member["config"].setdefault("solver", {}).update(overrides)
        print(json.dumps(dumped, indent=2))
        return EXIT_OK

    outdir = args.out or "out"
    os.makedirs(outdir, exist_ok=True)
    jobs = []
    for panel in scenario["panels"]:
        for member in panel["members"]:
            jobs.append((member["slug"], member["config"], overrides, args.solver))
    workers = _worker_count(len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scenario_worker, jobs))
    else:
        results = [_scenario_worker(job) for job in jobs]
    by_slug = {r["slug"]: r for r in results}

    all_converged = True
    manifest_panels = []
    strike = None
    for panel in scenario["panels"]:
        entry = {"label": panel["label"], "members": [], "reference_csv": None,
                 "reference_label": None}
        for member in panel["members"]:
            slug = member["slug"]
            res = by_slug[slug]
            model = build_model(member["config"], f"member {slug}", None)
            strike = model.strike
            if "failed" in res:
                print(f"{slug}: solve failed: {res['failed']}", file=sys.stderr)
                all_converged = False
                continue
            if not res["converged"]:
                print(f"{slug}: NOT CONVERGED after {res['iterations']} iterations",
                      file=sys.stderr)
                all_converged = False
            bpath = f"{slug}_boundary.csv"
            epath = f"{slug}_errors.csv"
            apath = f"{slug}_alpha.csv"
            _write_csv(os.path.join(outdir, bpath),
                       ["t", "boundary", "gamma_bound", "strike"],
                       ([_fmt(t), _fmt(b), _fmt(g), _fmt(model.strike)]
                        for t, b, g in zip(res["t"], res["boundary"], res["gamma_bound"])))
            _write_csv(os.path.join(outdir, epath), ["k", "d_k", "log10_d_k"],
                       ([str(k), _fmt(d), _fmt(math.log10(d) if d > 0 else float("-inf"))]
                        for k, d in enumerate(res["errors"], start=1)))
            ts = np.linspace(0.0, model.T, _ALPHA_GRID_POINTS)
            _write_csv(os.path.join(outdir, apath), ["t", "alpha"],
                       ([_fmt(t), _fmt(a)] for t, a in zip(ts, model.alpha(ts))))
            entry["members"].append({"label": member["label"], "slug": slug,
                                     "boundary_csv": bpath, "errors_csv": epath,
                                     "alpha_csv": apath})
        if panel.get("reference"):
            ref_model = build_model(panel["members"][0]["config"], "reference", None)
            rpath = f"{args.name.replace('-', '_')}_reference.csv"
            _write_csv(os.path.join(outdir, rpath), ["t", "boundary"],
                       _reference_rows(panel["reference"], ref_model))
            entry["reference_csv"] = rpath
            entry["reference_label"] = panel["reference"]["label"]
        manifest_panels.append(entry)

    manifest = {"schema": 1, "preset": args.name, "strike": strike,
                "panels": manifest_panels}
    mpath = os.path.join(outdir, "manifest.json")
    with open(mpath, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"{args.name}: {len(jobs)} members solved with {workers} worker(s)")
    print(f"wrote {mpath}")
    return EXIT_OK if all_converged else EXIT_NO_CONVERGENCE


# ---------------------------------------------------------------------------
# argument parsing


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, metavar="DIR",
                   help="output directory (default: config 'outputs' or ./out)")
    p.add_argument("--solver", choices=("picard", "backward"), default="picard",
                   help="boundary solver (default: picard)")
    p.add_argument("--N", type=int, default=None, help="override mesh size")
    p.add_argument("--delta", type=float, default=None,
                   help="override convergence threshold on d_k")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None,
                   help="override the sweep limit")
    p.add_argument("--dump-config", action="store_true",
                   help="print the resolved config as JSON and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oustop",
        description="Optimal stopping boundaries and option values for "
                    "time-dependent Ornstein-Uhlenbeck processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boundary", help="solve the free boundary, write CSVs")
    p.add_argument("--config", required=True, metavar="PATH|PRESET")
    _add_solver_flags(p)
    p.set_defaults(run=cmd_boundary)

    p = sub.add_parser("value", help="tabulate option values on a grid")
    p.add_argument("--config", required=True, metavar="PATH|PRESET")
    _add_solver_flags(p)
    p.set_defaults(run=cmd_value)

    p = sub.add_parser("mc-check", help="cross-check values against Monte Carlo")
    p.add_argument("--config", required=True, metavar="PATH|PRESET")
    _add_solver_flags(p)
    p.add_argument("--seed", type=int, default=None, help="override MC seed")
    p.add_argument("--paths", type=int, default=None, help="override MC path count")
    p.add_argument("--steps", type=int, default=None, help="override MC step count")
    p.add_argument("--perturb", type=float, default=None, metavar="SHIFT",
                   help="shift the stopping boundary by SHIFT before the "
                        "strategy simulation (a nonzero shift should lose value)")
    p.set_defaults(run=cmd_mc_check)

    p = sub.add_parser("scenario", help="run a preset family and write a manifest")
    p.add_argument("name", metavar="PRESET",
                   help="one of: " + ", ".join(presets.PRESET_NAMES))
    _add_solver_flags(p)
    p.set_defaults(run=cmd_scenario)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NodeConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
