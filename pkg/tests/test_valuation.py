"""Value assembly: European leg, premium sum, smooth fit, put-call duality."""

import numpy as np
import pytest

from oustop import mc
from oustop.model import OUModel
from oustop.params import Constant
from oustop.solver import (
    Boundary,
    Mesh,
    SolverConfig,
    make_log_mesh,
    picard_solve,
    put_call_transform,
)
from oustop.valuation import european_term, premium_term, smooth_fit_gap, value

UNIT = Constant(1.0)


def fig3_model():
    return OUModel(UNIT, Constant(0.0), UNIT, T=1.0, lam=1.0, strike=0.0)


@pytest.fixture(scope="module")
def fig3():
    return fig3_model()


@pytest.fixture(scope="module")
def deep40(fig3):
    return picard_solve(fig3, SolverConfig(N=40, delta=1e-12, max_iter=20000))


@pytest.fixture(scope="module")
def default200(fig3):
    return picard_solve(fig3, SolverConfig(N=200))


def test_value_at_expiry_equals_gain(fig3, deep40):
    for x in (-0.7, -0.1, 0.0, 0.4):
        vp = value(fig3, deep40.boundary, 1.0, x)
        assert vp.V == vp.gain == max(-x, 0.0)
        assert vp.premium == 0.0


def test_frozen_values_on_deep_40_node_boundary(fig3, deep40):
    assert deep40.converged
    b = deep40.boundary
    assert value(fig3, b, 0.0, 0.0).V == pytest.approx(0.24104174156233543, abs=1e-7)
    assert value(fig3, b, 0.0, 0.5).V == pytest.approx(0.12634588112109013, abs=1e-7)
    assert value(fig3, b, 0.5, 0.25).V == pytest.approx(0.13114574066312396, abs=1e-7)


def test_value_matching_at_the_boundary(fig3, deep40):
    # at mesh nodes the solved boundary makes V equal the exercise gain
    b = deep40.boundary
    for i in range(0, 40, 3):
        t_i = float(b.mesh.nodes[i])
        level = float(b.values[i])
        vp = value(fig3, b, t_i, level)
        assert vp.V == pytest.approx(fig3.strike - level, abs=2e-6)
        assert vp.in_stopping_region


def test_value_decreasing_in_state(fig3, default200):
    xs = np.linspace(-1.5, 1.5, 61)
    vs = np.array([value(fig3, default200.boundary, 0.4, float(x)).V for x in xs])
    assert np.all(np.diff(vs) < 1e-12)


def test_value_slope_between_minus_one_and_zero(fig3, default200):
    h = 1e-4
    for t in (0.2, 0.6):
        for x in (-0.5, 0.0, 0.5):
            v0 = value(fig3, default200.boundary, t, x).V
            v1 = value(fig3, default200.boundary, t, x + h).V
            slope = (v1 - v0) / h
            assert -1.0 - 1e-3 <= slope <= 1e-3


def test_value_dominates_gain_near_boundary(fig3, default200):
    # discretization leaves a small deficit just inside the exercise region;
    # measured worst on this config is -2.7e-3
    worst = 0.0
    for t in (0.1, 0.3, 0.7):
        level = default200.boundary(t)
        for x in np.linspace(level - 0.05, fig3.strike + 1.0, 30):
            vp = value(fig3, default200.boundary, t, float(x))
            worst = min(worst, vp.V - vp.gain)
    assert worst > -3e-3


def test_exercise_region_deficit_shrinks_with_refinement(fig3):
    # deep in the exercise region the right Riemann sum understates the
    # premium; the deficit roughly halves when the mesh doubles
    def deficits(N):
        r = picard_solve(fig3, SolverConfig(N=N, delta=1e-6, max_iter=20000))
        assert r.converged
        level = r.boundary(0.3)
        out = []
        for depth in (0.5, 1.0, 5.0, 10.0):
            vp = value(fig3, r.boundary, 0.3, float(level - depth))
            out.append(vp.V - vp.gain)
        return np.array(out)

    d40 = deficits(40)
    d80 = deficits(80)
    assert np.all(d40 < 0) and np.all(d80 < 0)
    assert np.all(d40 > -0.21)
    assert np.all(d80 > -0.11)
    assert np.all(np.abs(d80) < 0.6 * np.abs(d40))


def test_european_term_frozen(fig3):
    assert european_term(fig3, 0.0, 0.0) == pytest.approx(0.09649936486013894, abs=1e-12)


def test_premium_term_edges(fig3, deep40):
    assert premium_term(fig3, deep40.boundary, 1.0, -0.3) == 0.0
    with pytest.raises(ValueError, match="lie in"):
        premium_term(fig3, deep40.boundary, -0.1, 0.0)
    with pytest.raises(ValueError, match="lie in"):
        premium_term(fig3, deep40.boundary, 1.5, 0.0)
    short = Boundary(make_log_mesh(0.5, 4), np.zeros(5))
    with pytest.raises(ValueError, match="horizon"):
        premium_term(fig3, short, 0.2, 0.0)


def test_premium_positive_in_continuation(fig3, deep40):
    vp = value(fig3, deep40.boundary, 0.2, 0.3)
    assert vp.premium > 0.0
    assert vp.european > 0.0
    assert not vp.in_stopping_region
    assert vp.V == vp.european + vp.premium


def test_smooth_fit_gap_small_inside_horizon(fig3, default200):
    gap_half = smooth_fit_gap(fig3, default200.boundary, 0.5)
    assert abs(gap_half) < 0.05
    assert abs(smooth_fit_gap(fig3, default200.boundary, 0.75)) < 0.05
    # near t=0 the 200-node mesh is coarsest; the gap sits just above 0.05
    assert abs(smooth_fit_gap(fig3, default200.boundary, 0.25)) < 0.06
    # halving the probe step barely moves the estimate
    gap_fine = smooth_fit_gap(fig3, default200.boundary, 0.5, h=5e-5)
    assert abs(gap_half - gap_fine) < 5e-4


def test_smooth_fit_gap_validation(fig3, default200):
    with pytest.raises(ValueError, match="strictly inside"):
        smooth_fit_gap(fig3, default200.boundary, 0.0)
    with pytest.raises(ValueError, match="strictly inside"):
        smooth_fit_gap(fig3, default200.boundary, 1.0)
    with pytest.raises(ValueError, match="positive"):
        smooth_fit_gap(fig3, default200.boundary, 0.5, h=-1e-4)


def test_put_call_duality_through_mc():
    # the call on the reflected model, exercised above the reflected
    # boundary, replicates the put: compare the two strategy estimates on
    # mirrored processes, then sanity-check against the closed-form put
    A = 0.25
    m_call = OUModel(UNIT, Constant(0.4), UNIT, T=1.0, lam=0.8, strike=A)
    m_put = OUModel(UNIT, Constant(2 * A - 0.4), UNIT, T=1.0, lam=0.8, strike=A)
    rp = picard_solve(m_put, SolverConfig(N=40))
    assert rp.converged
    b_call = put_call_transform(rp.boundary, A)
    cfg = mc.MCConfig(n_paths=20000, n_steps=200, seed=11)
    x0 = 0.0
    r_put = mc.boundary_strategy_value(m_put, rp.boundary, 0.0, x0, cfg)
    r_call = mc.call_strategy_value(m_call, b_call, 0.0, 2 * A - x0, cfg)
    se = float(np.hypot(r_put.stderr, r_call.stderr))
    assert abs(r_call.mean - r_put.mean) <= 3 * se
    # both sit below the closed-form optimum (grid crossing checks lose value)
    v_put = value(m_put, rp.boundary, 0.0, x0).V
    assert r_call.mean <= v_put + 3 * r_call.stderr
    assert r_put.mean <= v_put + 3 * r_put.stderr
