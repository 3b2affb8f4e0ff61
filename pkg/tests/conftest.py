import numpy as np
import pytest

from qitest.data import Dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240808)


def random_truncated(rng, n, censored=False, round_to=None):
    """Left-truncated sample: entries exponential, exits entry + positive gap."""
    entry = rng.exponential(1.0, n)
    gap = rng.exponential(2.0, n)
    if round_to is not None:
        entry = np.round(entry, round_to)
        gap = np.round(gap, round_to) + 10.0**-round_to
    failure = entry + gap
    if not censored:
        return Dataset(entry, failure, np.ones(n, dtype=int))
    cens = entry + rng.exponential(3.0, n)
    exit_ = np.minimum(failure, cens)
    event = (failure <= cens).astype(int)
    return Dataset(entry, exit_, event)


@pytest.fixture
def make_dataset(rng):
    def _make(n, censored=False, round_to=None):
        return random_truncated(rng, n, censored=censored, round_to=round_to)

    return _make


@pytest.fixture
def toy_uncensored():
    # three overlapping-window subjects used by many worked examples
    return Dataset([0.0, 1.0, 2.0], [3.0, 2.0, 4.0], [1, 1, 1])


@pytest.fixture
def toy_censored():
    return Dataset([0.0, 1.0, 1.5], [3.0, 2.0, 4.0], [1, 0, 1])
