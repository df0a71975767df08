"""Boundary solvers: mesh, Picard sweep, backward induction, reflection."""

import numpy as np
import pytest

from oustop.kernel import k_lambda
from oustop.model import OUModel, terminal_boundary
from oustop.params import Constant, Sinusoid
from oustop.solver import (
    Boundary,
    Mesh,
    NodeConvergenceError,
    SolverConfig,
    backward_induction_solve,
    make_log_mesh,
    picard_solve,
    picard_step,
    put_call_transform,
    squared_distance,
)

UNIT = Constant(1.0)


def fig3_model():
    return OUModel(UNIT, Constant(0.0), UNIT, T=1.0, lam=1.0, strike=0.0)


# -- mesh ---------------------------------------------------------------

MESH4 = [0.0, 0.3573740195087885, 0.6201145069582775, 0.8279889392428698, 1.0]


def test_log_mesh_frozen():
    mesh = make_log_mesh(1.0, 4)
    np.testing.assert_allclose(mesh.nodes, MESH4, rtol=0.0, atol=1e-15)
    assert mesh.nodes[0] == 0.0
    assert mesh.nodes[-1] == 1.0
    assert mesh.n_intervals == 4
    assert mesh.horizon == 1.0


def test_log_mesh_scales_and_pins_endpoints():
    mesh = make_log_mesh(2.5, 300)
    assert mesh.nodes[0] == 0.0
    assert mesh.nodes[-1] == 2.5  # exact despite ln(e) rounding
    np.testing.assert_allclose(mesh.nodes, 2.5 * np.array(make_log_mesh(1.0, 300).nodes), atol=1e-15)
    spacing = np.diff(mesh.nodes)
    assert np.all(np.diff(spacing) < 0)  # nodes crowd toward expiry


def test_mesh_validation():
    with pytest.raises(ValueError, match="two nodes"):
        Mesh(np.array([0.0]))
    with pytest.raises(ValueError, match="start at t = 0"):
        Mesh(np.array([0.1, 1.0]))
    with pytest.raises(ValueError, match="strictly increasing"):
        Mesh(np.array([0.0, 0.5, 0.5, 1.0]))


def test_log_mesh_validation():
    with pytest.raises(ValueError):
        make_log_mesh(0.0, 10)
    with pytest.raises(ValueError):
        make_log_mesh(np.inf, 10)
    with pytest.raises(ValueError):
        make_log_mesh(1.0, 0)
    with pytest.raises(ValueError):
        make_log_mesh(1.0, 10.0)


def test_boundary_interpolates():
    mesh = Mesh(np.array([0.0, 0.5, 1.0]))
    b = Boundary(mesh, np.array([1.0, 3.0, 2.0]))
    assert b(0.25) == 2.0
    assert isinstance(b(0.25), float)
    np.testing.assert_allclose(b(np.array([0.0, 0.75, 1.0])), [1.0, 2.5, 2.0])


def test_boundary_validation():
    mesh = Mesh(np.array([0.0, 1.0]))
    with pytest.raises(ValueError, match="match the mesh"):
        Boundary(mesh, np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError, match="finite"):
        Boundary(mesh, np.array([1.0, np.nan]))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(N=0)
    with pytest.raises(ValueError):
        SolverConfig(delta=0.0)
    with pytest.raises(ValueError):
        SolverConfig(delta=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    # an infinite tolerance legitimately means "stop after one sweep"
    assert SolverConfig(delta=np.inf).delta == np.inf


# -- Picard sweep -------------------------------------------------------


def test_picard_step_matches_naive_kernel_sum():
    m = OUModel(Constant(1.1), Sinusoid(0.4, 1.0, 0.3, 0.1), UNIT, T=1.0, lam=0.5, strike=0.3)
    mesh = make_log_mesh(1.0, 6)
    t = mesh.nodes
    b_prev = Boundary(mesh, -0.3 - 0.1 * t)
    stepped = picard_step(m, b_prev)

    A = m.strike
    dt = np.diff(t)
    naive = np.empty(len(t))
    for i in range(len(t)):
        euro = k_lambda(m, A, 1.0, t[i], b_prev.values[i], m.T, A)
        acc = 0.0
        for j in range(i + 1, len(t)):
            th = float(m.theta(t[j]))
            al = float(m.alpha(t[j]))
            acc += dt[j - 1] * k_lambda(
                m, m.lam * A + th * al, m.lam + th, t[i], b_prev.values[i], t[j], b_prev.values[j]
            )
        naive[i] = A - euro - acc
    naive[-1] = terminal_boundary(m)
    np.testing.assert_allclose(stepped.values, naive, rtol=0.0, atol=1e-10)


def test_first_iterate_is_sweep_of_flat_profile():
    m = fig3_model()
    report = picard_solve(m, SolverConfig(N=12, delta=1e-30, max_iter=1))
    assert report.iterations == 1
    assert not report.converged
    assert len(report.errors) == 1
    flat = Boundary(report.boundary.mesh, np.full(13, terminal_boundary(m)))
    np.testing.assert_array_equal(report.boundary.values, picard_step(m, flat).values)


def test_picard_converges_on_small_mesh():
    report = picard_solve(fig3_model(), SolverConfig(N=20))
    assert report.converged
    assert report.iterations == len(report.errors) == 9
    # error sequence decreases strictly from the second step on
    tail = np.array(report.errors[1:])
    assert np.all(np.diff(tail) < 0)
    assert report.errors[-1] < 1e-3
    assert all(e >= 1e-3 for e in report.errors[:-1])
    # converged profile barely moves under one more sweep
    again = picard_step(fig3_model(), report.boundary)
    assert squared_distance(again, report.boundary) < 1e-3


def test_terminal_node_pinned_exactly():
    m = fig3_model()
    report = picard_solve(m, SolverConfig(N=10))
    assert report.boundary.values[-1] == terminal_boundary(m) == 0.0

    m2 = OUModel(UNIT, Constant(1.0), UNIT, T=1.0, lam=0.0, strike=0.2)
    r2 = picard_solve(m2, SolverConfig(N=10))
    assert r2.boundary.values[-1] == 0.2


# -- cross-solver agreement; frozen regressions -------------------------

NODES5 = [
    0.0,
    0.29539452912034764,
    0.5231371636115855,
    0.7085130668623151,
    0.8648397251631903,
    1.0,
]
PICARD5 = [
    -0.49469459451782644,
    -0.5009852210549581,
    -0.498420327812358,
    -0.46372392096790604,
    -0.5263607314752493,
    0.0,
]
BACKWARD5 = [
    -0.49469469626733537,
    -0.500984654703791,
    -0.4984220377420504,
    -0.4637191450569522,
    -0.5263650422155356,
    0.0,
]


def test_frozen_five_node_solves_agree():
    m = fig3_model()
    rp = picard_solve(m, SolverConfig(N=5, delta=1e-12, max_iter=20000))
    rb = backward_induction_solve(m, SolverConfig(N=5))
    assert rp.converged and rb.converged
    np.testing.assert_allclose(rp.boundary.mesh.nodes, NODES5, rtol=0.0, atol=1e-15)
    np.testing.assert_allclose(rp.boundary.values, PICARD5, rtol=0.0, atol=1e-7)
    np.testing.assert_allclose(rb.boundary.values, BACKWARD5, rtol=0.0, atol=1e-7)
    assert np.max(np.abs(rp.boundary.values - rb.boundary.values)) < 1e-5
    # the backward solution is a near-fixed point of the Picard sweep
    stepped = picard_step(m, rb.boundary)
    assert np.max(np.abs(stepped.values - rb.boundary.values)) < 1e-8
    assert rb.errors == ()
    assert rb.iterations > 0


def test_refinement_tightens_the_origin_value():
    m = fig3_model()
    b0 = {}
    for N in (5, 20, 200):
        r = picard_solve(m, SolverConfig(N=N, delta=1e-10, max_iter=20000))
        assert r.converged
        b0[N] = r.boundary.values[0]
    assert b0[5] == pytest.approx(-0.49469357376402273, abs=1e-7)
    assert b0[20] == pytest.approx(-0.5504404259289597, abs=1e-7)
    assert b0[200] == pytest.approx(-0.5684390287466712, abs=1e-7)
    assert abs(b0[5] - b0[200]) > abs(b0[20] - b0[200])


# -- controls and failure modes -----------------------------------------


def test_clamp_floor_flags_report():
    report = picard_solve(fig3_model(), SolverConfig(N=20, clamp_low=-0.2))
    assert report.clamped
    assert report.converged
    assert report.boundary.values.min() == -0.2


def test_nonconvergence_is_reported_not_raised():
    report = picard_solve(fig3_model(), SolverConfig(N=20, delta=1e-30, max_iter=2))
    assert not report.converged
    assert report.iterations == 2
    assert len(report.errors) == 2
    assert np.all(np.isfinite(report.boundary.values))


def test_node_convergence_error_contract():
    err = NodeConvergenceError(7, 1.5e-4)
    assert err.node == 7
    assert err.residual == 1.5e-4
    assert "node 7" in str(err)
    assert isinstance(err, RuntimeError)


def test_solvers_require_unit_volatility():
    m = OUModel(UNIT, Constant(0.0), Constant(2.0), T=1.0, lam=1.0, strike=0.0)
    with pytest.raises(ValueError, match="unit-volatility"):
        picard_solve(m, SolverConfig(N=5))
    with pytest.raises(ValueError, match="unit-volatility"):
        backward_induction_solve(m, SolverConfig(N=5))


def test_squared_distance():
    mesh = Mesh(np.array([0.0, 1.0]))
    a = Boundary(mesh, np.array([1.0, 2.0]))
    b = Boundary(mesh, np.array([0.0, 4.0]))
    assert squared_distance(a, b) == 5.0
    other = Boundary(Mesh(np.array([0.0, 2.0])), np.array([1.0, 2.0]))
    with pytest.raises(ValueError, match="different meshes"):
        squared_distance(a, other)


def test_put_call_transform():
    mesh = Mesh(np.array([0.0, 1.0, 2.0]))
    b = Boundary(mesh, np.array([-0.5, 0.0, 0.25]))
    call = put_call_transform(b, 0.25)
    np.testing.assert_array_equal(call.values, [1.0, 0.5, 0.25])
    assert call.mesh is mesh
    back = put_call_transform(call, 0.25)
    np.testing.assert_allclose(back.values, b.values, rtol=0.0, atol=1e-15)
    with pytest.raises(ValueError, match="finite"):
        put_call_transform(b, np.inf)
