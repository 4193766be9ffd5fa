import numpy as np
import pytest

from twistgrowth import _kernels
from twistgrowth.fixtures import dichotomy_spec, loop_bundle


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # keep JIT compilation out of timed acceptance paths
    _kernels.warmup()


@pytest.fixture(scope="session")
def loop():
    """(gog, twist, theta) for the one-loop fixture."""
    return loop_bundle()


@pytest.fixture(scope="session")
def spec_case1():
    return dichotomy_spec("b")


@pytest.fixture(scope="session")
def spec_case2():
    return dichotomy_spec("t")


@pytest.fixture()
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_word(rng, basis, max_len=12):
    n = int(rng.integers(0, max_len + 1))
    vals = rng.integers(1, basis.rank + 1, size=n) * rng.choice([1, -1], size=n)
    return basis.from_values(list(vals))


def random_nontrivial_word(rng, basis, max_len=12):
    while True:
        w = random_word(rng, basis, max_len)
        if not w.is_identity:
            return w
