import numpy as np
import pytest

from huecodec import synthetic


@pytest.fixture(scope="session")
def corpus():
    """Full-size synthetic HDR corpus (large enough for TMQI)."""
    return synthetic.build_corpus()


@pytest.fixture(scope="session")
def small_corpus():
    """Cheap 64x64 corpus for codec-level tests."""
    return synthetic.build_corpus((64, 64))


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
