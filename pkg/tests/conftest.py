import numpy as np
import pytest

from debranges.hb_core import HBSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def make_random_spec(rng, min_degree=3, max_degree=12):
    n = int(rng.integers(min_degree, max_degree + 1))
    zeros = [complex(rng.uniform(-3, 3), rng.uniform(-3, -0.1)) for _ in range(n)]
    return HBSpec(zeros=zeros)
