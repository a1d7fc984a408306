"""
Partially Random Mobility

k nodes, chosen once uniformly without replacement, move fully randomly;
the remaining n - k nodes stay where they started.
"""

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.mobility_config import MobilityKind
from ..utils.seeding import SeedStream


class PartiallyRandomMobility(BaseMobility):
    """
    Mixture of static and fully random nodes.

    With k = 0 it reproduces the static model exactly (same positions for
    the same seed); with k = n it has the fully random law.
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.PARTIALLY_RANDOM

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        mobile = rng.choice(self.n, size=self.spec.k, replace=False)
        static_mask = np.ones(self.n, dtype=bool)
        static_mask[mobile] = False
        return MobilityState(spec=self.spec, world=self.world, static_mask=static_mask)

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        return self._uniform_positions(stream.generator())

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        fresh = self._uniform_positions(stream.generator())
        return np.where(state.static_mask[:, None], positions, fresh)

    @property
    def is_frozen(self) -> bool:
        return self.spec.k == 0
