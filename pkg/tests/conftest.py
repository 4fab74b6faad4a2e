import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polarmem.dmc import DiscreteChannel

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def channels(draw, max_outputs=4):
    """Random binary-input channel with a few outputs (zeros allowed)."""
    k = draw(st.integers(1, max_outputs))
    rows = []
    for _ in range(2):
        w = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=k, max_size=k)))
        if w.sum() < 1e-3:
            w[draw(st.integers(0, k - 1))] = 1.0
        rows.append(w / w.sum())
    return DiscreteChannel(np.array(rows))


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)
