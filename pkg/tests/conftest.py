import pytest

from jetlab.core_numerics import RandomStream


@pytest.fixture
def rng():
    return RandomStream(20240607)
