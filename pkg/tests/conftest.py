"""Shared test fixtures and configuration factories."""

import numpy as np
import pytest

from sa_mimo_noma.allocation import AllocationMode, RateTargets
from sa_mimo_noma.config import LinkDirection, SelectionMode, SystemConfig
from sa_mimo_noma.geometry import Region


def make_config(**overrides):
    """Downlink fixed-split baseline on the 20 m cell; override freely."""
    base = dict(
        bs_antennas=2,
        user_antennas=2,
        region=Region(inner_radius=10.0, outer_radius=20.0, min_distance=1.0),
        alpha=3.0,
        rho=1e5,
        rho_interferer=0.0,
        interferer_density=0.0,
        delta=1.0,
        rates=RateTargets(near=1.0, far=1.0),
        allocation=AllocationMode.FIXED,
        link=LinkDirection.DOWNLINK,
        selection=SelectionMode.RANDOM,
        fixed_far_sq=0.75,
        trials=1000,
        seed=2024,
    )
    base.update(overrides)
    return SystemConfig(**base)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def base_config():
    return make_config()
