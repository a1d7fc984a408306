"""
Mobility Models

This package contains the specific mobility model implementations and the
registry that dispatches on MobilityKind.
"""

from .static import StaticMobility
from .fully_random import FullyRandomMobility
from .partially_random import PartiallyRandomMobility
from .velocity_constrained import VelocityConstrainedMobility
from .area_constrained import AreaConstrained1DMobility, AreaConstrained2DMobility
from .registry import (
    MOBILITY_CLASSES,
    create_mobility,
    init_stationary,
    step,
    speed_of,
    speeds,
)

__all__ = [
    'StaticMobility',
    'FullyRandomMobility',
    'PartiallyRandomMobility',
    'VelocityConstrainedMobility',
    'AreaConstrained1DMobility',
    'AreaConstrained2DMobility',
    'MOBILITY_CLASSES',
    'create_mobility',
    'init_stationary',
    'step',
    'speed_of',
    'speeds',
]
