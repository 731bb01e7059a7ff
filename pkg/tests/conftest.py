import os
import random

import pytest

DEFAULT_SEED = 20260814


def fuzz_seed():
    return int(os.environ.get("COSEGAL_SEED", str(DEFAULT_SEED)))


@pytest.fixture
def rng():
    """A deterministic RNG; override the seed with COSEGAL_SEED."""
    return random.Random(fuzz_seed())
