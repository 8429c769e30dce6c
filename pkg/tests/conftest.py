import os

import pytest
from hypothesis import HealthCheck, settings

from tvar.examples import polarization, threefold

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def ex1():
    fd = threefold()
    return fd, polarization(fd)


@pytest.fixture(scope="session")
def fam():
    from tvar.family import build_family, choose_parameters
    from tvar.positivity import to_support

    params = choose_parameters(2)
    dp = build_family(params)
    fd, h = to_support(dp)
    return params, dp, fd, h
