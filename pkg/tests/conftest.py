import random

import pytest
from hypothesis import settings

settings.register_profile("det", derandomize=True, max_examples=50)
settings.load_profile("det")

PRIMES = (2, 3, 5, 7)


@pytest.fixture(params=PRIMES)
def prime(request):
    return request.param


@pytest.fixture
def rng():
    return random.Random(20260815)
