"""
Pytest configuration and fixtures for mobile gossip tests.
"""

import os
import sys
import tempfile

import numpy as np
import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from mobile_gossip.core.geometry import Boundary, Snapshot, WorldConfig
from mobile_gossip.core.mobility_config import MobilityKind, MobilitySpec


ENV_VARS = ("MGOSSIP_OUTPUT", "MGOSSIP_LOG_DIR", "MGOSSIP_LOG_LEVEL", "MGOSSIP_WORKERS")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte-Carlo checks at acceptance scale")


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Run every test without MGOSSIP_* overrides."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


@pytest.fixture
def line_snapshot():
    """Three nodes on a horizontal line 0.1 apart and one far away node."""
    return Snapshot.from_points([(0.1, 0.5), (0.2, 0.5), (0.3, 0.5), (0.8, 0.5)])


@pytest.fixture
def random_snapshot():
    """200 uniform nodes from a fixed seed."""
    return Snapshot(np.random.default_rng(12345).random((200, 2)))


@pytest.fixture
def small_world():
    """Small square world with the default radius."""
    return WorldConfig(n=64, seed=11)


@pytest.fixture
def torus_world():
    """Small torus world with a fixed radius."""
    return WorldConfig(n=100, r=0.2, boundary=Boundary.TORUS, seed=3)


@pytest.fixture
def all_specs():
    """One valid spec per mobility model for n = 64."""
    return [
        MobilitySpec(kind=MobilityKind.STATIC),
        MobilitySpec(kind=MobilityKind.FULLY_RANDOM),
        MobilitySpec(kind=MobilityKind.PARTIALLY_RANDOM, k=16),
        MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.05),
        MobilitySpec(kind=MobilityKind.AREA_CONSTRAINED_1D, n_v=32, n_h=32),
        MobilitySpec(kind=MobilityKind.AREA_CONSTRAINED_2D, r_c=0.1),
    ]
