"""
Static Mobility

Nodes keep their initial uniform positions forever.
"""

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.mobility_config import MobilityKind
from ..utils.seeding import SeedStream


class StaticMobility(BaseMobility):
    """
    Mobility model in which no node moves.

    The resulting evolving graph is a single random geometric graph.
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.STATIC

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        return MobilityState(spec=self.spec, world=self.world)

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        return self._uniform_positions(stream.generator())

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        return np.array(positions, copy=True)

    @property
    def is_frozen(self) -> bool:
        """Static nodes never move."""
        return True
