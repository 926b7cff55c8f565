import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entropylab import convexfn as cf
from entropylab.errors import EmptyFeasibleCone
from entropylab.solvers import (FAN, GODUNOV, HOPF_LAX, GridSolution, InitialData,
                                PiecewiseLinear, fan_solution, godunov_flux, godunov_solve,
                                hopf_lax_solve, l1_distance, reconstruct_potential, restrict,
                                uniform_edges, write_csv)
from entropylab.waves import solve_riemann

from conftest import random_flux, seeds

W = (-2.0, 2.0)


def edge_index(sol, x):
    return int(np.argmin(np.abs(sol.x_edges - x)))


# -- Hopf-Lax -----------------------------------------------------------------

def test_hopf_lax_rarefaction_center():
    w0 = PiecewiseLinear(np.array([0.0]), np.array([0.0]), -1.0, 1.0)  # |y|
    e = uniform_edges(W, 0.01)
    sol = hopf_lax_solve(cf.burgers(), w0, [1.0], e)
    i = edge_index(sol, 0.0)
    assert sol.w[0, i] == pytest.approx(0.0, abs=1e-15)
    # right difference quotient at x=0 is O(dx)
    assert abs(sol.u[0, i]) <= 0.01


def test_hopf_lax_shock():
    u0 = InitialData.riemann(1.0, 0.0, W)
    e = uniform_edges(W, 0.01)
    sol = hopf_lax_solve(cf.burgers(), u0.potential(), [1.0], e)
    i = edge_index(sol, 0.25)
    assert sol.w[0, i] == pytest.approx(-0.25, abs=1e-14)
    assert sol.u[0, i] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("f", [cf.burgers(), cf.flat_flux(), cf.absolute(), cf.power(2.0)])
def test_hopf_lax_affine_data(f):
    c = 0.7
    w0 = PiecewiseLinear(np.array([0.0]), np.array([0.3]), c, c)
    e = uniform_edges(W, 0.05)
    sol = hopf_lax_solve(f, w0, [0.5, 1.0], e)
    for n, t in enumerate(sol.t):
        np.testing.assert_allclose(sol.w[n], c * e - float(f(c)) * t + 0.3, atol=1e-9)
        np.testing.assert_allclose(sol.u[n], c, atol=1e-8)


def test_hopf_lax_equals_exact_fan_on_riemann_data():
    f = cf.flat_flux()
    u0 = InitialData.riemann(-1.0, 2.0, W)
    e = uniform_edges(W, 0.01)
    hl = hopf_lax_solve(f, u0.potential(), [1.0], e)
    ex = fan_solution(solve_riemann(f, -1.0, 2.0), [1.0], e)
    assert l1_distance(hl, ex, 1.0) <= 1e-10


def test_empty_feasible_cone():
    class NoConjugate(cf.PiecewiseQuadratic):
        def conjugate(self, p):
            return np.full(np.shape(p), math.inf) if np.ndim(p) else math.inf

    f = NoConjugate((), [(0.5, 0.0, 0.0)])
    w0 = PiecewiseLinear(np.array([0.0]), np.array([0.0]), 0.0, 0.0)
    with pytest.raises(EmptyFeasibleCone):
        hopf_lax_solve(f, w0, [1.0], uniform_edges((-1, 1), 0.5))


@given(seeds, st.lists(st.floats(-2, 2), min_size=2, max_size=5))
def test_hopf_lax_trace_order(seed, vals):
    # strictly convex flux with f'' >= c: w(t, .) is semiconcave with constant 1/(c t)
    f = random_flux(seed, strict=True)
    c = 2 * min(a for a, _, _ in f.pieces)
    breaks = tuple(np.linspace(-1, 1, len(vals) - 1)) if len(vals) > 1 else ()
    u0 = InitialData("piecewise_constant", W, breaks, tuple(vals))
    e = uniform_edges(W, 0.02)
    t = 0.5
    sol = hopf_lax_solve(f, u0.potential(), [t], e)
    um, up = sol.traces(t)
    assert np.all(up <= um + 0.02 / (c * t) + 1e-9)


# -- Godunov ------------------------------------------------------------------

def test_godunov_flux_examples():
    b = cf.burgers()
    assert godunov_flux(b, 1.0, 0.0) == 0.5
    assert godunov_flux(b, 0.0, 1.0) == 0.0
    assert godunov_flux(b, -1.0, 1.0) == 0.0


@pytest.mark.parametrize("f", [cf.burgers(), cf.flat_flux(), cf.power(2.0)])
def test_godunov_constant_state(f):
    sol = godunov_solve(f, InitialData.constant(-0.4, (-1, 1)), 0.5, 0.05)
    np.testing.assert_array_equal(sol.u, -0.4)


def test_godunov_degenerate_speed_is_stationary():
    sol = godunov_solve(cf.flat_flux(), InitialData.riemann(0.2, 0.8, (-1, 1)), 1.0, 0.1)
    assert sol.meta["cfl_degenerate"]
    np.testing.assert_array_equal(sol.u[-1], sol.u[0])


def test_godunov_rejects_bad_cfl():
    with pytest.raises(ValueError):
        godunov_solve(cf.burgers(), InitialData.constant(0.0), 1.0, 0.1, cfl=1.2)


def test_godunov_lands_on_requested_times():
    sol = godunov_solve(cf.burgers(), InitialData.riemann(1, 0, W), 1.0, 0.02,
                        times=[0.3, 0.7])
    for t in (0.0, 0.3, 0.7, 1.0):
        assert np.any(sol.t == t)


def _random_data(rng, window, n_breaks=4):
    breaks = tuple(np.sort(rng.uniform(window[0] / 2, window[1] / 2, n_breaks)))
    return breaks, rng.uniform(-2, 2, n_breaks + 1)


@given(seeds)
def test_godunov_conservation(seed):
    rng = np.random.default_rng(seed)
    f = random_flux(seed)
    breaks, vals = _random_data(rng, W)
    sol = godunov_solve(f, InitialData("piecewise_constant", W, breaks, tuple(vals)), 0.8, 0.05)
    mass = sol.u.sum(axis=1) * sol.dx
    scale = 1 + np.abs(sol.u).sum() * sol.dx
    assert abs(mass[-1] - mass[0] + sol.meta["boundary_flux_integral"]) <= 1e-10 * scale


def test_godunov_monotone_on_100_pairs():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        f = cf.random_piecewise(rng)
        breaks, vals = _random_data(rng, W)
        bump = rng.uniform(0, 1, vals.size) * (rng.uniform(size=vals.size) < 0.7)
        a = InitialData("piecewise_constant", W, breaks, tuple(vals))
        b = InitialData("piecewise_constant", W, breaks, tuple(vals + bump))
        top = max(abs(float(f.d_minus(-2.0))), abs(float(f.d_plus(3.0))), 1e-3)
        # a shared time grid finer than either CFL step makes the updates identical in dt
        dx = 0.05
        stops = np.arange(1, 41) * (0.4 * dx / top)
        sa = godunov_solve(f, a, float(stops[-1]), dx, times=stops[:-1])
        sb = godunov_solve(f, b, float(stops[-1]), dx, times=stops[:-1])
        if sa.t.shape != sb.t.shape:
            continue
        assert np.all(sa.u <= sb.u + 1e-12)


# -- potentials ---------------------------------------------------------------

def test_reconstruct_constant():
    f = cf.burgers()
    c = 0.6
    sol = reconstruct_potential(godunov_solve(f, InitialData.constant(c, W), 1.0, 0.05), f)
    for n, t in enumerate(sol.t):
        np.testing.assert_allclose(sol.w[n], c * (sol.x_edges - W[0]) - f(c) * t, atol=1e-12)


def test_reconstruct_shock():
    f = cf.burgers()
    sol = reconstruct_potential(godunov_solve(f, InitialData.riemann(1, 0, W), 1.0, 0.01), f)
    i = edge_index(sol, 0.25)
    # w = x - t/2 + 2 left of the shock with the anchor w(0, -2) = 0
    assert sol.w[-1, i] == pytest.approx(-0.25 + 2.0, abs=0.02)


def test_reconstruct_rarefaction():
    f = cf.burgers()
    sol = reconstruct_potential(godunov_solve(f, InitialData.riemann(0, 1, W), 1.0, 0.005), f)
    inside = np.abs(sol.x_edges) < 0.8
    np.testing.assert_allclose(sol.w[-1, inside], sol.x_edges[inside].clip(0) ** 2 / 2, atol=0.02)
    # differencing w recovers u
    np.testing.assert_allclose(np.diff(sol.w[-1]) / sol.dx, sol.u[-1], atol=1e-10)


# -- comparison and output -----------------------------------------------------

def test_l1_identical_and_refined():
    f = cf.burgers()
    fan = solve_riemann(f, 1.0, 0.0)
    a = fan_solution(fan, [1.0], uniform_edges(W, 0.02))
    b = fan_solution(fan, [1.0], uniform_edges(W, 0.01))
    assert l1_distance(a, a, 1.0) == 0.0
    assert l1_distance(a, b, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_l1_time_outside_grid():
    a = fan_solution(solve_riemann(cf.burgers(), 1, 0), [1.0], uniform_edges(W, 0.1))
    with pytest.raises(ValueError):
        l1_distance(a, a, 3.0)


def test_restrict_requires_nesting():
    np.testing.assert_allclose(restrict(np.arange(6.0), 2), [0.5, 2.5, 4.5])
    with pytest.raises(ValueError):
        restrict(np.arange(5.0), 2)


def test_uniform_edges_validation():
    assert uniform_edges((0, 1), 0.25).tolist() == [0, 0.25, 0.5, 0.75, 1.0]
    for bad in [((0, 1), 0.3), ((0, 1), -0.1), ((1, 0), 0.1)]:
        with pytest.raises(ValueError):
            uniform_edges(*bad)


def test_grid_solution_shape_check():
    with pytest.raises(ValueError):
        GridSolution([0.0], [0, 1, 2], [[1.0]])


def test_sources():
    e = uniform_edges(W, 0.1)
    u0 = InitialData.riemann(1, 0, W)
    assert hopf_lax_solve(cf.burgers(), u0.potential(), [1.0], e).source == HOPF_LAX
    assert godunov_solve(cf.burgers(), u0, 1.0, 0.1).source == GODUNOV
    assert fan_solution(solve_riemann(cf.burgers(), 1, 0), [1.0], e).source == FAN


def test_sampled_initial_data_averages():
    u0 = InitialData.sampled(lambda x: x ** 3, (-1.0, 1.0))
    e = np.array([0.0, 0.5, 1.0])
    np.testing.assert_allclose(u0.cell_averages(e), [0.5 ** 4 / 4 / 0.5,
                                                      (1 - 0.5 ** 4) / 4 / 0.5])


def test_csv_format(tmp_path):
    sol = fan_solution(solve_riemann(cf.burgers(), 1, 0), [0.5, 1.0], uniform_edges(W, 0.5))
    p = tmp_path / "s.csv"
    write_csv(sol, p, [1.0])
    raw = p.read_bytes()
    assert raw.startswith(b"t,x,u,w\n") and b"\r" not in raw and b"," in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 1 + 8
    assert all(float(r.split(",")[0]) == 1.0 for r in lines[1:])
