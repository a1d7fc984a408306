"""
Fully Random Mobility

Every node is uniformly distributed on the square and i.i.d. over slots.
"""

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.mobility_config import MobilityKind
from ..utils.seeding import SeedStream


class FullyRandomMobility(BaseMobility):
    """
    Memoryless mobility: the post-move position ignores the current one.

    This idealistic model gives the largest possible improvement from
    mobility; no cut survives the move.
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.FULLY_RANDOM

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        return MobilityState(spec=self.spec, world=self.world)

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        return self._uniform_positions(stream.generator())

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        return self._uniform_positions(stream.generator())
