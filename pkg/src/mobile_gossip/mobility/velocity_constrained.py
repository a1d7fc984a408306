"""
Velocity Constrained Mobility

The post-move position is uniform in the disk of radius v_max around the
current one.
"""

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.mobility_config import MobilityKind
from ..utils.seeding import SeedStream


class VelocityConstrainedMobility(BaseMobility):
    """
    Disk-step mobility with speed bound v_max.

    On the torus the step wraps around and the uniform law is exactly
    stationary. On the square a proposal leaving the square is redrawn,
    which keeps |X(t+1) - X(t)| <= v_max but bends the stationary law
    slightly near the edges.
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.VELOCITY_CONSTRAINED

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        return MobilityState(spec=self.spec, world=self.world)

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        return self._uniform_positions(stream.generator())

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        return self._disk_move(positions, self.spec.v_max, stream, fallback=positions)

    @property
    def is_frozen(self) -> bool:
        return self.spec.v_max == 0
