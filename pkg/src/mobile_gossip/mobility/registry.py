"""
Mobility Registry

Maps each MobilityKind to its model class and exposes the mobility
operations as plain functions over (spec, world, state, snapshot).
"""

from typing import Dict, Optional, Tuple, Type

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.errors import InvalidParameterError
from ..core.geometry import Boundary, Snapshot, WorldConfig, displacement
from ..core.mobility_config import MobilityKind, MobilitySpec
from .area_constrained import AreaConstrained1DMobility, AreaConstrained2DMobility
from .fully_random import FullyRandomMobility
from .partially_random import PartiallyRandomMobility
from .static import StaticMobility
from .velocity_constrained import VelocityConstrainedMobility

MOBILITY_CLASSES: Dict[MobilityKind, Type[BaseMobility]] = {
    MobilityKind.STATIC: StaticMobility,
    MobilityKind.FULLY_RANDOM: FullyRandomMobility,
    MobilityKind.PARTIALLY_RANDOM: PartiallyRandomMobility,
    MobilityKind.VELOCITY_CONSTRAINED: VelocityConstrainedMobility,
    MobilityKind.AREA_CONSTRAINED_1D: AreaConstrained1DMobility,
    MobilityKind.AREA_CONSTRAINED_2D: AreaConstrained2DMobility,
}


def create_mobility(spec: MobilitySpec, world: WorldConfig) -> BaseMobility:
    """
    Instantiate the model class registered for ``spec.kind``.

    Raises:
        InvalidParameterError: if the spec is inconsistent with the world
    """
    return MOBILITY_CLASSES[spec.kind](spec, world)


def init_stationary(
    spec: MobilitySpec,
    world: WorldConfig,
    rng,
    layout: Optional[Snapshot] = None,
) -> Tuple[Snapshot, MobilityState]:
    """Stationary slot-0 snapshot and auxiliary state for one run."""
    return create_mobility(spec, world).init_stationary(rng, layout=layout)


def step(spec: MobilitySpec, state: MobilityState, snap: Snapshot, rng) -> Snapshot:
    """One move phase: snapshot at slot t to snapshot at slot t + 1."""
    if state.spec != spec:
        raise InvalidParameterError(f"state was built for {state.spec.describe()}, not {spec.describe()}")
    return create_mobility(spec, state.world).step(state, snap, rng)


def _check_consecutive(before: Snapshot, after: Snapshot):
    if after.slot != before.slot + 1:
        raise InvalidParameterError(
            f"snapshots are not consecutive: slots {before.slot} and {after.slot}"
        )
    if after.n != before.n:
        raise InvalidParameterError(f"snapshot sizes differ: {before.n} and {after.n}")


def speeds(before: Snapshot, after: Snapshot, boundary: Boundary = Boundary.SQUARE) -> np.ndarray:
    """Displacement |X_i(t+1) - X_i(t)| of every node."""
    _check_consecutive(before, after)
    return displacement(before.positions, after.positions, boundary)


def speed_of(before: Snapshot, after: Snapshot, i: int, boundary: Boundary = Boundary.SQUARE) -> float:
    """Displacement of node i between two consecutive snapshots."""
    _check_consecutive(before, after)
    if not 0 <= i < before.n:
        raise InvalidParameterError(f"node id out of range for n={before.n}: {i}")
    return float(displacement(before.positions[i], after.positions[i], boundary))
