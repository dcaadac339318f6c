import numpy as np
import pytest

from speedscale.model import INFINITE, Instance, Job, PowerLaw


def mk_instance(*specs, label=""):
    """Build an instance from (arrival, value, deadline) triples; ids follow order."""
    jobs = tuple(Job(i, a, float(v), d) for i, (a, v, d) in enumerate(specs))
    return Instance(jobs, label=label)


@pytest.fixture
def alpha2():
    return PowerLaw(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_small_instance(rng, n_max=8, arrival_max=3, horizon_cap=6):
    """Small instance whose clairvoyant horizon stays under the brute-force guard."""
    n = int(rng.integers(1, n_max + 1))
    arrivals = sorted(int(a) for a in rng.integers(1, arrival_max + 1, size=n))
    allow_inf = arrivals[-1] + n <= horizon_cap
    jobs = []
    for i, a in enumerate(arrivals):
        if allow_inf and rng.random() < 0.25:
            d = INFINITE
        else:
            d = int(rng.integers(1, horizon_cap - a + 2))
        jobs.append(Job(i, a, float(rng.uniform(0, 20)), d))
    return Instance(tuple(jobs))
