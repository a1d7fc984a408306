"""
Core Components

Errors, world geometry, mobility registry and the mobility base class.
"""

from .errors import (
    ConfigError,
    InvalidParameterError,
    MobileGossipError,
    NumericalFailureError,
    ResultWriteError,
)
from .geometry import (
    Boundary,
    CutSet,
    NodeSet,
    Position,
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
from .mobility_config import MobilityKind, MobilitySpec, get_mobility_spec, parse_kind
from .base_mobility import BaseMobility, MobilityState
from .rejection_sampler import RejectionSampler

__all__ = [
    'ConfigError',
    'InvalidParameterError',
    'MobileGossipError',
    'NumericalFailureError',
    'ResultWriteError',
    'Boundary',
    'CutSet',
    'NodeSet',
    'Position',
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
    'get_mobility_spec',
    'parse_kind',
    'BaseMobility',
    'MobilityState',
    'RejectionSampler',
]
