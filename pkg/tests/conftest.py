import numpy as np
import pytest

from lowcross.core import ExplicitSetSystem


def random_explicit_system(n, m, rng, min_m=None):
    """Random explicit system: each range holds each element with prob 1/2."""
    ranges = []
    for _ in range(m):
        mask = rng.random(n) < 0.5
        ranges.append(np.flatnonzero(mask))
    return ExplicitSetSystem(n, ranges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
