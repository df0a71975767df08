"""Built-in scenario presets for the shipped figure families.

Every preset is a JSON-ready config dict (model block with parameter-family
descriptors, solver block, MC block), so `--dump-config` round-trips through
the same loader as user-written files. Scenario presets add panel/member
structure: fig3 sweeps the discount rate across three mesh sizes, fig1a-c
sweep one coefficient each, fig2a sweeps the polynomial slope order toward
the Brownian-bridge limit and fig2b the capped-slope bridge approximation.
"""

from __future__ import annotations

import copy

PRESET_NAMES = ("fig1a", "fig1b", "fig1c", "fig2a-bb", "fig2b-oub", "fig3")

_SOLVER = {"N": 200, "delta": 1e-3, "max_iter": 500}
_MC = {"n_paths": 100_000, "n_steps": 1000, "seed": 0}

# sup |b - b_bb| on [0, 0.8] is benchmarked against -B sqrt(1 - t)
BB_COEFFICIENT = 0.8399


def _fn(kind: str, *params) -> dict:
    return {"kind": kind, "params": [p if isinstance(p, list) else float(p) for p in params]}


def _config(theta: dict, alpha: dict, sigma: dict, lam: float) -> dict:
    return {
        "model": {
            "theta": theta,
            "alpha": alpha,
            "sigma": sigma,
            "T": 1.0,
            "lam": float(lam),
            "strike": 0.0,
        },
        "solver": dict(_SOLVER),
        "mc": dict(_MC),
    }


_UNIT = _fn("constant", 1.0)
_ZERO = _fn("constant", 0.0)


def _fig1a_members():
    sweeps = [
        ("step_up", "α: -1 -> 1", _fn("normal_cdf_step", -1.0, 2.0, 0.5, 0.1)),
        ("step_down", "α: 1 -> -1", _fn("normal_cdf_step", 1.0, -2.0, 0.5, 0.1)),
        ("bump", "α: bump at 0.5", _fn("normal_pdf_bump", 0.0, 2.5, 0.5, 0.1)),
    ]
    return [
        {"slug": f"fig1a_{slug}", "label": label, "config": _config(_UNIT, alpha, _UNIT, 1.0)}
        for slug, label, alpha in sweeps
    ]


def _fig1b_members():
    sweeps = [
        ("theta1", "θ = 1", _UNIT),
        ("theta5", "θ = 5", _fn("constant", 5.0)),
        ("theta_step", "θ: 1 -> 10", _fn("normal_cdf_step", 1.0, 9.0, 0.5, 0.05)),
    ]
    return [
        {"slug": f"fig1b_{slug}", "label": label, "config": _config(theta, _UNIT, _UNIT, 1.0)}
        for slug, label, theta in sweeps
    ]


def _fig1c_members():
    alpha = _fn("sinusoid", 1.0, 1.0, 0.0, 0.0)
    sweeps = [
        ("sigma1", "σ = 1", _UNIT),
        ("bump_mid", "σ: bump at 0.5", _fn("normal_pdf_bump", 1.0, 5.0, 0.5, 0.08)),
        ("bump_early", "σ: bump at 0.25", _fn("normal_pdf_bump", 1.0, 5.0, 0.25, 0.05)),
    ]
    return [
        {"slug": f"fig1c_{slug}", "label": label, "config": _config(_UNIT, alpha, sigma, 1.0)}
        for slug, label, sigma in sweeps
    ]


def _fig2a_members():
    members = []
    for n in (2, 5, 8, 12):
        theta = _fn("polynomial", *([1.0] * (n + 1)))
        members.append(
            {"slug": f"fig2a_n{n}", "label": f"n = {n}", "config": _config(theta, _ZERO, _UNIT, 0.0)}
        )
    return members


def _fig2b_members():
    alpha = _fn("sech", 2.0, 5.0, 1.0)
    members = []
    for eps in (0.2, 0.1, 0.05):
        theta = _fn("coth_capped", 5.0, 1.0, eps)
        slug = f"fig2b_eps{str(eps).replace('.', 'p')}"
        members.append(
            {"slug": slug, "label": f"ε = {eps}", "config": _config(theta, alpha, _UNIT, 0.0)}
        )
    return members


def _fig3_panels():
    panels = []
    for n_mesh in (5, 20, 200):
        members = []
        for lam in (0.5, 1.0, 2.0, 5.0):
            cfg = _config(_UNIT, _ZERO, _UNIT, lam)
            cfg["solver"]["N"] = n_mesh
            slug = f"fig3_N{n_mesh}_lam{str(lam).replace('.', 'p')}"
            members.append({"slug": slug, "label": f"λ = {lam:g}", "config": cfg})
        panels.append({"label": f"N = {n_mesh}", "members": members, "reference": None})
    return panels


def scenario(name: str) -> dict:
    """Full sweep description for a preset: panels of labelled member configs."""
    if name == "fig3":
        panels = _fig3_panels()
    elif name == "fig1a":
        panels = [{"label": "pulling level sweep", "members": _fig1a_members(), "reference": None}]
    elif name == "fig1b":
        panels = [{"label": "slope sweep", "members": _fig1b_members(), "reference": None}]
    elif name == "fig1c":
        panels = [{"label": "volatility sweep", "members": _fig1c_members(), "reference": None}]
    elif name == "fig2a-bb":
        panels = [
            {
                "label": "polynomial slope order",
                "members": _fig2a_members(),
                "reference": {"curve": "bb_sqrt", "label": f"-{BB_COEFFICIENT} √(1-t)"},
            }
        ]
    elif name == "fig2b-oub":
        panels = [{"label": "capped bridge slope", "members": _fig2b_members(), "reference": None}]
    else:
        raise KeyError(f"unknown preset {name!r} (known: {', '.join(PRESET_NAMES)})")
    return copy.deepcopy({"preset": name, "panels": panels})


def base_config(name: str) -> dict:
    """Single representative config for a preset (fig3: λ = 1 at N = 200)."""
    sc = scenario(name)
    if name == "fig3":
        for panel in sc["panels"]:
            if panel["label"] == "N = 200":
                for member in panel["members"]:
                    if member["label"] == "λ = 1":
                        return copy.deepcopy(member["config"])
    return copy.deepcopy(sc["panels"][0]["members"][0]["config"])
