import random

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from orbicat.corpus import random_gspace

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=10**6)


def space_from_seed(seed, **kw):
    return random_gspace(random.Random(seed), **kw)
