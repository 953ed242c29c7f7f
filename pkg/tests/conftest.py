import random

import pytest

from coopstore.field import binary_field, prime_field


@pytest.fixture
def gf7():
    return prime_field(7)


@pytest.fixture
def gf11():
    return prime_field(11)


@pytest.fixture
def gf16():
    return binary_field(4)


@pytest.fixture
def rng():
    return random.Random(0xC0DE)
