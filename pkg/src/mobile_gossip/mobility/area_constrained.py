"""
Area Constrained Mobility

Two models in which each node roams a restricted part of the square:

    - one-dimensional: n_v nodes move only vertically and n_h only
      horizontally, each fully random along its own line
    - two-dimensional: each node stays within distance r_c of a fixed
      home point
"""

import numpy as np

from ..core.base_mobility import BaseMobility, MobilityState
from ..core.mobility_config import MobilityKind
from ..utils.seeding import SeedStream


class AreaConstrained1DMobility(BaseMobility):
    """
    Line-bound mobility.

    A V-node keeps its x-coordinate for the whole run and draws a fresh
    uniform y every slot; an H-node keeps y and redraws x. The lines are
    drawn once, uniformly, when the run starts.
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.AREA_CONSTRAINED_1D

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        vertical_mask = self._choose_vertical(rng)
        line_coords = rng.random(self.n)
        return MobilityState(
            spec=self.spec,
            world=self.world,
            vertical_mask=vertical_mask,
            line_coords=line_coords,
        )

    def state_for_layout(self, positions: np.ndarray, rng: np.random.Generator) -> MobilityState:
        """Lines pass through the layout positions."""
        vertical_mask = self._choose_vertical(rng)
        line_coords = np.where(vertical_mask, positions[:, 0], positions[:, 1])
        return MobilityState(
            spec=self.spec,
            world=self.world,
            vertical_mask=vertical_mask,
            line_coords=line_coords,
        )

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        return self._place_on_lines(state, stream.generator().random(self.n))

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        return self._place_on_lines(state, stream.generator().random(self.n))

    def _choose_vertical(self, rng: np.random.Generator) -> np.ndarray:
        vertical_mask = np.zeros(self.n, dtype=bool)
        vertical_mask[rng.permutation(self.n)[:self.spec.n_v]] = True
        return vertical_mask

    @staticmethod
    def _place_on_lines(state: MobilityState, free: np.ndarray) -> np.ndarray:
        vertical = state.vertical_mask
        x = np.where(vertical, state.line_coords, free)
        y = np.where(vertical, free, state.line_coords)
        return np.column_stack((x, y))


class AreaConstrained2DMobility(BaseMobility):
    """
    Home-point mobility.

    Every slot a node is placed uniformly in the disk of radius r_c around
    its home point, independently of where it was. Homes are uniform on
    the square; disks leaving the square are handled like the velocity
    model (wrap on a torus, rejection on a square).
    """

    def get_kind(self) -> MobilityKind:
        """Return the mobility kind."""
        return MobilityKind.AREA_CONSTRAINED_2D

    def init_state(self, rng: np.random.Generator) -> MobilityState:
        return MobilityState(spec=self.spec, world=self.world, home_points=rng.random((self.n, 2)))

    def state_for_layout(self, positions: np.ndarray, rng: np.random.Generator) -> MobilityState:
        """Home points are the layout positions."""
        return MobilityState(spec=self.spec, world=self.world, home_points=positions)

    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        homes = np.asarray(state.home_points)
        return self._disk_move(homes, self.spec.r_c, stream, fallback=homes)

    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        homes = np.asarray(state.home_points)
        return self._disk_move(homes, self.spec.r_c, stream, fallback=positions)
