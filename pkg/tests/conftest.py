import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fraclab.app.modules.domain import Domain, build_eigenbasis, build_grid, make_corpus  # noqa: E402

# Numerical checks are slow per draw; keep the search small and deterministic.
settings.register_profile("fraclab", max_examples=25, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("fraclab")


@pytest.fixture
def interval():
    return Domain.interval(-1.0, 1.0)


@pytest.fixture
def unit_pi():
    return Domain.interval(0.0, np.pi)


@pytest.fixture
def interval_grid(interval):
    return build_grid(interval, 64)


@pytest.fixture
def interval_basis(interval, interval_grid):
    return build_eigenbasis(interval, interval_grid)


@pytest.fixture
def corpus_pair(interval, interval_grid):
    return make_corpus(interval, interval_grid, 3, seed=0)[1]
