import random

import pytest

from gpdext.cocycle import TwoCocycle, pauli_cocycle
from gpdext.groupoid import abelian_group_groupoid, pair_groupoid


@pytest.fixture
def rng():
    return random.Random(20260808)


@pytest.fixture
def klein():
    return abelian_group_groupoid((2, 2))


@pytest.fixture
def pauli(klein):
    return pauli_cocycle(klein)


@pytest.fixture
def pair2():
    return pair_groupoid(2)


@pytest.fixture
def pair2_trivial(pair2):
    return TwoCocycle.trivial(pair2)
