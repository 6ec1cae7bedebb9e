import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from subordlab.config import Config, set_config, get_config

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _fresh_config():
    saved = get_config()
    set_config(Config())
    yield
    set_config(saved)


def complex_coeffs(n, bound=1.0):
    """Strategy for ``n`` complex coefficients bounded componentwise."""
    comp = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)
    return st.lists(st.builds(complex, comp, comp), min_size=n, max_size=n)


def random_series(rng, n, scale=1.0, c0=None):
    c = scale * (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)) / np.sqrt(2)
    if c0 is not None:
        c[0] = c0
    return c


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, _line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(_line(k, *RESULTS[k]))
