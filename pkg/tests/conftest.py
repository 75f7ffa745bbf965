import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fieldpos.tensor import Momentum

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

finite = dict(allow_nan=False, allow_infinity=False)
components = st.floats(-8.0, 8.0, **finite)
momenta = st.builds(lambda a, b, c: Momentum(np.array([a, b, c]), 1.0), components, components, components)
moderate = st.builds(
    lambda a, b, c: Momentum(np.array([a, b, c]), 1.0),
    *(st.floats(-3.0, 3.0, **finite) for _ in range(3)),
)
masses = st.floats(0.2, 5.0, **finite)
branches = st.sampled_from([1, -1])
spins = st.sampled_from([0.5, -0.5])

P_Z = Momentum(np.array([0.0, 0.0, 0.75]), 1.0)
P_GEN = Momentum(np.array([0.3, -0.2, 0.75]), 1.0)
P_REST = Momentum(np.zeros(3), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
