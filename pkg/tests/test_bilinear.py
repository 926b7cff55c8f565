import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from entropylab import convexfn as cf
from entropylab.bilinear import (DiscreteMeasure, average, bilinear_form, check_measure,
                                 check_uniform_convexity, decomposition, jensen_gaps, p_term,
                                 selftest)
from entropylab.entropypair import EntropyPair

from conftest import random_pair, seeds

HALF = DiscreteMeasure.from_atoms([(0.0, 0.5), (1.0, 0.5)])


def test_measure_merges_duplicates():
    m = DiscreteMeasure.from_atoms([(1.0, 0.25), (0.0, 0.5), (1.0, 0.25)])
    assert m.atoms == [(0.0, 0.5), (1.0, 0.5)]


@pytest.mark.parametrize("atoms", [[(0.0, 0.5)], [(0.0, 1.2), (1.0, -0.2)],
                                   [(np.inf, 1.0)]])
def test_measure_rejects_bad_atoms(atoms):
    with pytest.raises(ValueError):
        DiscreteMeasure.from_atoms(atoms)


def test_average_examples():
    assert average(HALF, lambda u: u) == 0.5
    assert average(DiscreteMeasure.from_atoms([(3.0, 1.0)]), np.exp) == pytest.approx(np.exp(3))
    assert average(HALF, lambda u: u ** 3 / 3) == pytest.approx(1 / 6, abs=1e-15)


def test_average_nonfinite_raises():
    with pytest.raises(ValueError):
        average(HALF, lambda u: np.where(u > 0.5, np.inf, u))


def test_bilinear_single_atom_zero(burgers_pair):
    assert bilinear_form(DiscreteMeasure.from_atoms([(2.0, 1.0)]), burgers_pair) == 0.0


def test_bilinear_hand_value(burgers_pair):
    assert bilinear_form(HALF, burgers_pair) == pytest.approx(1 / 48, abs=1e-12)


def test_bilinear_shifted_flux(burgers_pair):
    shifted = EntropyPair(cf.burgers().shifted(1.0, 5.0), cf.burgers())
    assert bilinear_form(HALF, shifted) == pytest.approx(1 / 48, abs=1e-12)


def test_bilinear_overflow_reported():
    pair = EntropyPair(cf.exp_flux(), cf.burgers())
    m = DiscreteMeasure.from_atoms([(0.0, 0.5), (800.0, 0.5)])
    with pytest.raises(OverflowError):
        bilinear_form(m, pair)


def test_p_term_examples(burgers_pair, flat_pair):
    assert p_term(burgers_pair, 0.7, 0.7) == 0.0
    assert p_term(burgers_pair, 0.0, 1.0) == pytest.approx(1 / 12, abs=1e-15)
    assert p_term(flat_pair, 1.0, 0.0) == 0.0


def test_jensen_gaps(burgers_pair):
    assert jensen_gaps(DiscreteMeasure.from_atoms([(4.0, 1.0)]), burgers_pair) == (0.0, 0.0)
    gf, ge = jensen_gaps(HALF, burgers_pair)
    assert gf == pytest.approx(0.125) and ge == pytest.approx(0.125)
    affine = EntropyPair(cf.flat_flux(), cf.burgers())
    m = DiscreteMeasure.from_atoms([(0.1, 0.3), (0.6, 0.7)])
    assert jensen_gaps(m, affine)[0] == 0.0


@st.composite
def measures(draw):
    n = draw(st.integers(1, 8))
    locs = draw(st.lists(st.floats(-5, 5), min_size=n, max_size=n))
    w = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n)))
    w /= w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return DiscreteMeasure(np.array(locs), w)


@given(measures(), seeds, st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_measure_properties(m, seed, shifts):
    assert check_measure(m, random_pair(seed), shifts) == []


@given(measures(), st.floats(0.1, 3), st.floats(0.1, 3), seeds)
def test_uniform_convexity_bound(m, c1, c2, seed):
    assert check_uniform_convexity(m, c1, c2, np.random.default_rng(seed)) == []


@given(measures(), seeds)
def test_decomposition_identity(m, seed):
    pair = random_pair(seed)
    p, q = decomposition(m, pair)
    B = bilinear_form(m, pair)
    assert p + q == pytest.approx(B, abs=1e-9 * (1 + abs(B)))
    assert p >= -1e-10 and q >= -1e-10


@given(seeds, st.floats(-5, 5), st.floats(-5, 5))
def test_p_term_zero_exactly_on_degeneracy(seed, u, v):
    pair = random_pair(seed)
    f = pair.flux
    inside = any(v in f.degeneracy_interval(u, s) for s in ("minus", "plus"))
    P = p_term(pair, v, u)
    scale = 1e-10 * (1 + abs(u) + abs(v)) ** 4
    if inside:
        assert abs(P) <= scale
    elif abs(v - u) > 1e-6:
        assert P > 0


def test_selftest_small_run(tmp_path):
    res = selftest(400, 50, seed=3)
    assert res.passed and res.trials == 400 and res.quadratic_trials == 50
    res.dump(tmp_path / "x.json")
    assert json.loads((tmp_path / "x.json").read_text()) == []
