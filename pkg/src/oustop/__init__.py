"""Optimal stopping boundaries and American option values for
time-dependent Ornstein-Uhlenbeck dynamics.

The finite-horizon put on a mean-reverting state with time-dependent
coefficients admits an early-exercise decomposition whose boundary solves a
Volterra-type integral equation. This package computes that boundary by
fixed-point (Picard) iteration on a logarithmic time mesh, prices by the
resulting premium representation, and cross-checks both against Monte Carlo
strategies and a backward-induction solve.
"""

from .params import (
    Constant,
    CothCapped,
    Exponential,
    NormalCdfStep,
    NormalPdfBump,
    ParamFn,
    Polynomial,
    Sech,
    Sinusoid,
    Tabulated,
)
from .model import (
    OUModel,
    TimeChangedModel,
    TransitionStats,
    gamma_bound,
    pull_back_boundary,
    terminal_boundary,
    to_unit_volatility,
    transition_mean,
    transition_stats,
    transition_var,
)
from .kernel import k_lambda, normal_cdf, normal_pdf

__version__ = "0.1.0"
