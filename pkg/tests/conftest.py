import numpy as np
import pytest


def unit(n: int, q: int) -> np.ndarray:
    """Real unit vector of quaternionic coordinate q in H^n."""
    v = np.zeros(4 * n)
    v[4 * q] = 1.0
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
