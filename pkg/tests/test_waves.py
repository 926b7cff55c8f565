import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import integrate

from entropylab import convexfn as cf
from entropylab.bilinear import p_term
from entropylab.errors import NonConvexFlux, NotUnderCompressive
from entropylab.waves import (CONTACT, LAX_SHOCK, NON_CONVEX, UNDER_COMPRESSIVE, Contact,
                              Rarefaction, Shock, WaveFan, check_rankine_hugoniot, classify,
                              fan_cell_averages, fan_potential, jump_fan, lax_inequality,
                              production_rate, sample_fan, solve_riemann,
                              undercompressive_budget)

from conftest import random_flux, random_pair, seeds

states = st.floats(-4, 4).map(lambda v: round(v, 3))


# -- Riemann fans -------------------------------------------------------------

def test_burgers_shock():
    fan = solve_riemann(cf.burgers(), 1.0, 0.0)
    (w,) = fan.waves
    assert type(w) is Shock and w.speed == 0.5


def test_burgers_rarefaction():
    fan = solve_riemann(cf.burgers(), 0.0, 1.0)
    (w,) = fan.waves
    assert isinstance(w, Rarefaction) and (w.xi_lo, w.xi_hi) == (0.0, 1.0)
    np.testing.assert_allclose(w.state(np.array([0.0, 0.3, 1.0])), [0.0, 0.3, 1.0])


def test_flat_composite_fan():
    fan = solve_riemann(cf.flat_flux(), -1.0, 2.0)
    kinds = [w.kind for w in fan.waves]
    assert kinds == ["rarefaction", "contact", "rarefaction"]
    r1, c, r2 = fan.waves
    assert (r1.xi_lo, r1.xi_hi) == (-1.0, 0.0)
    assert (c.speed, c.left, c.right) == (0.0, 0.0, 1.0)
    assert (r2.xi_lo, r2.xi_hi) == (0.0, 1.0)
    assert r2.state(0.5) == pytest.approx(1.5)


def test_downward_jump_on_affine_stretch_is_contact():
    fan = solve_riemann(cf.flat_flux(), 1.0, 0.0)
    assert isinstance(fan.waves[0], Contact)


def test_constant_fan():
    fan = solve_riemann(cf.burgers(), 0.3, 0.3)
    assert fan.waves == () and sample_fan(fan, 2.0, -5.0) == 0.3


def test_nonconvex_rejected():
    with pytest.raises(NonConvexFlux):
        solve_riemann(cf.PiecewiseQuadratic((), [(-0.5, 0.0, 0.0)]), 0.0, 1.0)


def test_analytic_rarefaction():
    fan = solve_riemann(cf.power(2.0), 0.0, 2.0)
    assert sample_fan(fan, 1.0, 1.0) == pytest.approx(1.0, abs=1e-10)


def test_fan_json_shape():
    d = json.loads(json.dumps(solve_riemann(cf.flat_flux(), -1.0, 2.0).to_dict()))
    assert set(d) == {"left", "right", "waves", "admissible"}
    assert d["waves"][0] == {"type": "rarefaction", "range": [-1.0, 0.0], "states": [-1.0, 0.0]}
    assert d["waves"][1]["speed"] == 0.0


# -- sampling -----------------------------------------------------------------

def test_sample_examples():
    b = cf.burgers()
    assert sample_fan(solve_riemann(b, 1.0, 0.0), 1.0, 0.25) == 1.0
    assert sample_fan(solve_riemann(b, 0.0, 1.0), 2.0, 1.0) == 0.5


def test_sample_right_trace_at_jump():
    assert sample_fan(solve_riemann(cf.burgers(), 1.0, 0.0), 1.0, 0.5) == 0.0


def test_sample_needs_positive_time():
    with pytest.raises(ValueError):
        sample_fan(solve_riemann(cf.burgers(), 1.0, 0.0), 0.0, 1.0)


def test_potential_of_rarefaction():
    fan = solve_riemann(cf.burgers(), 0.0, 1.0)
    x = np.linspace(-0.9, 0.9, 7) * 2.0
    # w = x^2/(2t) inside the fan, -f(u(0)) t = 0 at the origin
    np.testing.assert_allclose(fan_potential(fan, 2.0, x), x.clip(0) ** 2 / 4, atol=1e-14)


def test_potential_of_shock():
    fan = solve_riemann(cf.burgers(), 1.0, 0.0)
    assert fan_potential(fan, 1.0, 0.25) == pytest.approx(0.25 - 0.5, abs=1e-14)


def test_cell_averages_match_quadrature():
    fan = solve_riemann(cf.flat_flux(), -1.0, 2.0)
    edges = np.linspace(-1.5, 1.5, 13)
    avg = fan_cell_averages(fan, 1.0, edges)
    for i in range(12):
        ref, _ = integrate.quad(lambda x: sample_fan(fan, 1.0, x), edges[i], edges[i + 1],
                                points=[-1, 0, 1])
        assert avg[i] == pytest.approx(ref / (edges[i + 1] - edges[i]), abs=1e-10)


# -- production and classification -------------------------------------------

def test_production_examples(burgers_pair, flat_pair):
    s, D = production_rate(burgers_pair, 1.0, 0.0)
    assert s == 0.5 and D == pytest.approx(-1 / 12, abs=1e-15)
    s, D = production_rate(burgers_pair, 0.0, 1.0)
    assert s == 0.5 and D == pytest.approx(1 / 12, abs=1e-15)
    s, D = production_rate(flat_pair, 1.0, 0.0)
    assert s == 0.0 and D == 0.0
    assert math.copysign(1.0, s) == 1.0


def test_production_equals_integral(burgers_pair):
    s, D = production_rate(burgers_pair, 0.0, 1.0)
    ref, _ = integrate.quad(lambda v: v * (v - s), 0.0, 1.0)
    assert D == pytest.approx(ref, abs=1e-14)


def test_classify_examples(burgers_pair, flat_pair):
    assert classify(burgers_pair, 1.0, 0.0).classification == LAX_SHOCK
    assert classify(burgers_pair, 0.0, 1.0).classification == UNDER_COMPRESSIVE
    assert classify(flat_pair, 1.0, 0.0).classification == CONTACT


def test_classify_nonconvex():
    from entropylab.entropypair import EntropyPair
    pair = EntropyPair(cf.PiecewiseQuadratic((), [(-0.5, 0.0, 0.0)]), cf.burgers())
    assert classify(pair, 0.0, 1.0).classification == NON_CONVEX


def test_budget_examples(burgers_pair, flat_pair):
    ok = undercompressive_budget(burgers_pair, 0.0, 1.0, 1.0)
    assert ok.D == pytest.approx(1 / 12) and ok.satisfies_budget
    assert not undercompressive_budget(burgers_pair, 0.0, 1.0, 0.1).satisfies_budget
    with pytest.raises(NotUnderCompressive):
        undercompressive_budget(flat_pair, 0.0, 1.0, 1.0)


# -- properties ---------------------------------------------------------------

@given(seeds, states, states)
def test_fan_rankine_hugoniot_and_order(seed, ul, ur):
    f = random_flux(seed)
    for fan in (solve_riemann(f, ul, ur), jump_fan(f, ul, ur)):
        assert check_rankine_hugoniot(f, fan) <= 1e-12
        sp = fan.speeds()
        assert all(a <= b + 1e-12 for a, b in zip(sp, sp[1:]))


@given(seeds, states, states)
def test_admissible_fan_traces(seed, ul, ur):
    f = random_flux(seed)
    fan = solve_riemann(f, ul, ur)
    assert fan.admissible
    for w in fan.jumps():
        assert w.right <= w.left or f.is_affine_on(w.left, w.right)
    # sampled profile nondecreasing in xi when ul < ur, nonincreasing otherwise
    x = np.linspace(-20, 20, 801)
    u = sample_fan(fan, 1.0, x)
    d = np.diff(u)
    assert np.all(d >= -1e-12) if ul <= ur else np.all(d <= 1e-12)


@given(seeds, states, states)
def test_sign_equivalence(seed, um, up):
    pair = random_pair(seed)
    f = pair.flux
    assume(um != up)
    assume(not any(um in f.degeneracy_interval(up, s) for s in ("minus", "plus")))
    s, D = production_rate(pair, um, up)
    assume(abs(D) > 1e-12)
    assert (D < 0) == lax_inequality(f, um, up)
    assert classify(pair, um, up).classification in (LAX_SHOCK, UNDER_COMPRESSIVE)


@given(seeds, states, states)
def test_production_matches_p_term(seed, um, up):
    pair = random_pair(seed)
    assume(um != up)
    _, D = production_rate(pair, um, up)
    P = p_term(pair, up, um)
    assert (up - um) * D == pytest.approx(P, rel=1e-10, abs=1e-10)
    assert P >= -1e-10


@given(seeds, states, states)
def test_classify_never_contradicts(seed, um, up):
    assume(um != up)
    rep = classify(random_pair(seed), um, up)
    if rep.classification == CONTACT:
        assert rep.degenerate
    elif rep.classification == LAX_SHOCK:
        assert rep.lax
    else:
        assert not rep.lax
