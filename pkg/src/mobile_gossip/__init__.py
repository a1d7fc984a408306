"""
Mobile Gossip

A simulator for rumor spreading in mobile random geometric networks.

n nodes live in the unit square (or torus); each time slot every node
moves according to a mobility model and then gossips with one uniformly
chosen node within the transmission radius. The package measures how
long a rumor takes to reach everyone and estimates the mobile
conductance that bounds that time.

This package provides:
- Six mobility models: static, fully random, partially random,
  velocity constrained, and one- and two-dimensional area constrained
- Push-pull, push-only and pull-only gossip over a cell-grid spatial index
- Monte-Carlo conductance estimation over cut families, with exhaustive
  search for small n
- Closed-form conductance predictions and spreading-time bounds
- A multi-threaded experiment harness with reproducible seeding,
  CSV results and run manifests
- Configuration file support and a CLI

Example usage (CLI):
    # Spreading time of the velocity model at two sizes
    mobile-gossip spread --model velocity --vmax 0.05 --n 500 1000 --rounds 200

    # Conductance of the fully random model on the torus
    mobile-gossip conductance --model fully-random --boundary torus --out phi.csv

Example usage (Python API):
    from mobile_gossip import GossipMode, MobilityKind, MobilitySpec, SeedStream, WorldConfig, run_spread

    world = WorldConfig(n=1000, seed=7)
    spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.05)
    run = run_spread(world, spec, source=0, mode=GossipMode.PUSH_PULL,
                     max_slots=5000, rng=SeedStream(7))
    print(run.completion_slot)
"""

from .version import __version__

__author__ = 'Mobile Gossip Lab'
__license__ = 'MIT'

# Core exports
from .core.errors import (
    ConfigError,
    InvalidParameterError,
    MobileGossipError,
    NumericalFailureError,
    ResultWriteError,
)
from .core.geometry import (
    Boundary,
    CutSet,
    NodeSet,
    Snapshot,
    SpatialIndex,
    WorldConfig,
    build_index,
    crossing_edges,
    default_radius,
    distance,
    is_connected,
    neighbors,
)
from .core.mobility_config import MobilityKind, MobilitySpec

# Mobility exports
from .mobility.registry import create_mobility, init_stationary, speed_of, step

# Engine exports
from .engine.gossip import GossipMode, InformedSet, increment_estimate, run_spread, spreading_time
from .engine.conductance import (
    CutFamily,
    brute_force_min,
    estimate_cut_quotient,
    minimize_over_family,
    mixing_profile,
)
from .engine.theory import (
    contact_pairs_integral,
    density_profile,
    spreading_time_bound,
    table1_phi,
    velocity_phi,
)

# Utility exports
from .utils.seeding import SeedStream
from .utils.logger_setup import setup_logger

# Harness exports
from .config.config_loader import ConfigLoader, ExperimentConfig, load_config
from .harness.experiment_runner import run_experiment
from .harness.result_writer import ResultRow, write_csv

__all__ = [
    # Version
    '__version__',
    '__author__',
    '__license__',

    # Core
    'ConfigError',
    'InvalidParameterError',
    'MobileGossipError',
    'NumericalFailureError',
    'ResultWriteError',
    'Boundary',
    'CutSet',
    'NodeSet',
    'Snapshot',
    'SpatialIndex',
    'WorldConfig',
    'build_index',
    'crossing_edges',
    'default_radius',
    'distance',
    'is_connected',
    'neighbors',
    'MobilityKind',
    'MobilitySpec',

    # Mobility
    'create_mobility',
    'init_stationary',
    'speed_of',
    'step',

    # Engine
    'GossipMode',
    'InformedSet',
    'increment_estimate',
    'run_spread',
    'spreading_time',
    'CutFamily',
    'brute_force_min',
    'estimate_cut_quotient',
    'minimize_over_family',
    'mixing_profile',
    'contact_pairs_integral',
    'density_profile',
    'spreading_time_bound',
    'table1_phi',
    'velocity_phi',

    # Utilities
    'SeedStream',
    'setup_logger',

    # Harness
    'ConfigLoader',
    'ExperimentConfig',
    'load_config',
    'run_experiment',
    'ResultRow',
    'write_csv',
]
