import math

import numpy as np
import pytest
from hypothesis import given
from scipy import integrate

from entropylab import convexfn as cf
from entropylab.bilinear import p_term
from entropylab.entropypair import (EntropyPair, GrowthDescriptor, Unavailable,
                                    check_growth_conditions, gamma_closed_form, kruzkov_pair,
                                    make_pair, q_ratio, quadratic_form)
from entropylab.errors import NonConvexFlux, NonStrictEntropy, ZeroEntropyFlux

from conftest import random_pair, seeds


def test_burgers_entropy_flux(burgers_pair):
    assert burgers_pair.q(1.0) == pytest.approx(1 / 3, abs=1e-15)
    assert burgers_pair.q(-2.0) == pytest.approx(-8 / 3, abs=1e-14)
    assert burgers_pair.q(0.0) == 0.0


def test_abs_entropy_rejected():
    with pytest.raises(NonStrictEntropy):
        make_pair(cf.burgers(), cf.absolute())


def test_nonconvex_flux_rejected():
    with pytest.raises(NonConvexFlux):
        make_pair(cf.PiecewiseQuadratic((), [(-1.0, 0.0, 0.0)]), cf.burgers())


def test_kruzkov_values():
    b = cf.burgers()
    assert kruzkov_pair(b, 0.0).q(2.0) == 2.0
    assert kruzkov_pair(b, 1.0).q(0.0) == 0.5
    for k in (-1.3, 0.0, 2.5):
        kp = kruzkov_pair(cf.flat_flux(), k)
        assert kp.eta(k) == 0.0 and kp.q(k) == 0.0


def test_quadratic_form_burgers(burgers_pair):
    assert quadratic_form(burgers_pair, 1.0) == pytest.approx(1 / 12, abs=1e-15)
    assert quadratic_form(burgers_pair, 0.0) == 0.0
    assert quadratic_form(burgers_pair, 2.0) == pytest.approx(4 / 3, abs=1e-14)


def test_q_ratio(burgers_pair):
    assert q_ratio(burgers_pair, 2.0) == pytest.approx(0.5, abs=1e-14)
    assert q_ratio(burgers_pair, -2.0) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(ZeroEntropyFlux):
        q_ratio(burgers_pair, 0.0)


@pytest.mark.parametrize("desc, expected", [
    (GrowthDescriptor(alpha=2, beta=1), 1.5),
    (GrowthDescriptor(alpha=0, alpha_tilde=0.5, beta=1), 1.0),
    (GrowthDescriptor(alpha=2, beta=0, beta_tilde=0.5), 5.0),
    (GrowthDescriptor(alpha=1, beta=0, log_entropy=True), 2.0),
    (GrowthDescriptor(alpha=1, beta=3), 1.0),
])
def test_gamma_closed_form(desc, expected):
    assert gamma_closed_form(desc) == expected


def test_gamma_exponential_unavailable():
    g = gamma_closed_form(GrowthDescriptor(exp_flux=True, alpha=0, beta=1))
    assert isinstance(g, Unavailable) and not g


@pytest.mark.parametrize("alpha, beta", [(0.5, 1), (1, 1), (1, 2), (2, 3)])
def test_gamma_is_one_when_flux_grows_slower(alpha, beta):
    assert gamma_closed_form(GrowthDescriptor(alpha=alpha, beta=beta)) == 1.0


def test_growth_burgers_exact_cancellation(burgers_pair):
    rep = check_growth_conditions(burgers_pair, 1.0)
    for side in rep.sides:
        np.testing.assert_allclose(side.c_ratio, 1.0, rtol=1e-9)
    assert rep.condition_i and rep.condition_iii
    assert rep.label == "sampled evidence"


def test_growth_power_pair_bounded():
    rep = check_growth_conditions(EntropyPair(cf.power(2.0), cf.power(1.0)), 1.5)
    assert rep.c_max_over_min < 10 and rep.condition_iii


def test_growth_exponential_fails():
    rep = check_growth_conditions(EntropyPair(cf.exp_flux(), cf.burgers()), 3.0)
    assert not rep.condition_iii


def test_growth_rejects_small_gamma(burgers_pair):
    with pytest.raises(ValueError):
        check_growth_conditions(burgers_pair, 0.5)


def test_analytic_q_matches_quadrature():
    pair = EntropyPair(cf.power(2.0), cf.power(1.0))
    for u in (-3.0, -0.4, 0.7, 5.0):
        ref, _ = integrate.quad(lambda s: np.sign(s) * s * s * s, 0.0, u, epsabs=1e-13)
        assert pair.q(u) == pytest.approx(ref, rel=1e-6, abs=1e-10)


def _gauss_pieces(g, lo, hi, breaks, n=4):
    """Composite Gauss-Legendre; exact for polynomials between breaks."""
    x, w = np.polynomial.legendre.leggauss(n)
    knots = [lo, *[b for b in breaks if lo < b < hi], hi]
    total = 0.0
    for a, b in zip(knots, knots[1:]):
        total += 0.5 * (b - a) * np.sum(w * g(0.5 * (a + b) + 0.5 * (b - a) * x))
    return total


@given(seeds)
def test_exact_q_matches_quadrature(seed):
    pair = random_pair(seed)
    rng = np.random.default_rng(seed)
    bps = sorted(set(pair.flux.breakpoints) | set(pair.entropy.breakpoints))
    dd = lambda s: pair.entropy.d_plus(s) * pair.flux.d_plus(s)
    for u in rng.uniform(-6, 6, 20):
        ref = _gauss_pieces(dd, min(0.0, u), max(0.0, u), bps) * (1 if u > 0 else -1)
        assert pair.q(u) == pytest.approx(ref, rel=1e-9, abs=1e-10)


@given(seeds)
def test_quadratic_form_matches_p_form(seed):
    # with f(0) = q(0) = eta(0) = 0 the quadratic form is P(u, 0)
    rng = np.random.default_rng(seed)
    f = cf.random_piecewise(rng)
    eta = cf.random_piecewise(rng, strict=True)
    f = f.shifted(0.0, float(f(0.0)))
    eta = eta.shifted(0.0, float(eta(0.0)))
    pair = make_pair(f, eta)
    for u in rng.uniform(-6, 6, 10):
        Q = quadratic_form(pair, u)
        assert Q == pytest.approx(p_term(pair, u, 0.0), abs=1e-9 * (1 + abs(Q)))
        assert Q >= -1e-9 * (1 + abs(Q))
