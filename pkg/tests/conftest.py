"""
Pytest Configuration and Fixtures
==================================

Shared fixtures for all tests.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.channel import LinkBudget
from src.codebook import BaseKind, GroupTopology, build_codebook, random_codebook
from src.harness import ExperimentConfig

# Every uniform grouping of a 32-port surface
GROUPINGS_32 = [(32, 1), (16, 2), (8, 4), (4, 8), (2, 16), (1, 32)]


@pytest.fixture
def rng():
    """Fixture for a seeded random generator."""
    return np.random.default_rng(12345)


@pytest.fixture
def link_budget():
    """Fixture for the default link budget at 30 dBm transmit power."""
    return LinkBudget(tx_power_dbm=30.0)


@pytest.fixture
def small_topology():
    """Fixture for a small group-connected topology (N=4, G=2, M_bar=2)."""
    return GroupTopology(n_bs=4, g=2, m_bar=2)


@pytest.fixture
def topology_16x2():
    """Fixture for the group-connected topology used in the figures (G=16, M_bar=2)."""
    return GroupTopology(n_bs=4, g=16, m_bar=2)


@pytest.fixture
def dft_codebook(small_topology):
    """Fixture for a DFT codebook on the small topology."""
    return build_codebook(small_topology, BaseKind.DFT)


@pytest.fixture
def hadamard_codebook(small_topology):
    """Fixture for a Hadamard codebook on the small topology."""
    return build_codebook(small_topology, BaseKind.HADAMARD)


@pytest.fixture
def random_unitary_codebook(small_topology):
    """Fixture for a random-unitary codebook on the small topology."""
    return random_codebook(small_topology, np.random.default_rng(7))


@pytest.fixture
def small_config(tmp_path):
    """Fixture for a quick sweep configuration writing into a temp directory."""
    return ExperimentConfig(
        n_bs=2,
        architectures=[(4, 1), (2, 2)],
        strategies=[BaseKind.DFT, BaseKind.HADAMARD, BaseKind.RANDOM_UNITARY],
        power_sweep_dbm=(0.0, 20.0, 10.0),
        n_trials=20,
        master_seed=99,
        output=tmp_path / 'sweep.csv',
    )
