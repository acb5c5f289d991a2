import os

import pytest
from hypothesis import HealthCheck, settings

from celdist.datasets import load_fixture

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def fluid():
    return load_fixture("insulating_fluid_34kv").sample


@pytest.fixture(scope="session")
def aircon():
    return load_fixture("air_conditioning").sample
