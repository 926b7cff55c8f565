import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from entropylab import convexfn as cf
from entropylab.entropypair import make_pair

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
finite = st.floats(min_value=-6, max_value=6, allow_nan=False, allow_infinity=False)


def random_flux(seed, strict=False):
    return cf.random_piecewise(np.random.default_rng(seed), strict=strict)


def random_pair(seed):
    rng = np.random.default_rng(seed)
    return make_pair(cf.random_piecewise(rng), cf.random_piecewise(rng, strict=True))


@pytest.fixture
def burgers_pair():
    return make_pair(cf.burgers(), cf.burgers())


@pytest.fixture
def flat_pair():
    return make_pair(cf.flat_flux(), cf.burgers())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for res in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(res.line())
