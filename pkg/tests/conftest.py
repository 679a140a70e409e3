import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from skewprolong.kernels import numba_impl, numpy_impl

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

IMPLS = [pytest.param(numpy_impl, id="numpy")]
if numba_impl is not None:
    IMPLS.append(pytest.param(numba_impl, id="numba"))


@pytest.fixture(params=IMPLS)
def impl(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
