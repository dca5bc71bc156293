import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from nccr_kit.builtins import a1_singularity, conifold, gen_cyclic_quotient  # noqa: E402


@pytest.fixture(scope="session")
def cf():
    R, mods = conifold()
    return R, mods


@pytest.fixture(scope="session")
def a1():
    R, mods = a1_singularity()
    return R, mods


@pytest.fixture(scope="session")
def a2():
    return gen_cyclic_quotient(3, [1, 2])


@pytest.fixture(scope="session")
def ver3():
    return gen_cyclic_quotient(2, [1, 1, 1])
