import random

import pytest

from quadmot import coefficients as coeff
from quadmot.quadring import SplitQuadric


@pytest.fixture(scope="session")
def chow_int():
    return coeff.chow(8, 26)


@pytest.fixture(scope="session")
def ch2():
    return coeff.chow_mod2(26)


@pytest.fixture(scope="session")
def k2_int():
    return coeff.morava(2)


@pytest.fixture(scope="session")
def k2_mod2():
    return coeff.morava_mod2(2)


@pytest.fixture(scope="session")
def k3_mod2():
    return coeff.morava_mod2(3)


def random_class(quad: SplitQuadric, rng: random.Random, max_terms: int = 3):
    keys = quad.basis_keys()
    x = quad.zero()
    for key in rng.sample(keys, k=min(max_terms, len(keys))):
        if rng.random() < 0.8:
            x = x + quad.basis_class(key)
    return x
