import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "maxmult",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    derandomize=True,
)
settings.load_profile("maxmult")
