"""
Base Mobility

This module provides the abstract base class for all mobility models.
Every model draws its stationary initial positions and performs the
one-slot "move" phase; specific models inherit from BaseMobility and
implement its abstract methods.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParameterError
from .geometry import Boundary, Snapshot, WorldConfig
from .mobility_config import MobilityKind, MobilitySpec
from .rejection_sampler import RejectionSampler, uniform_disk_offsets
from ..utils.seeding import TAG_AUX, TAG_INIT, TAG_MOVE, SeedStream, as_stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MobilityState:
    """
    Auxiliary data fixed for a whole run.

    Attributes:
        spec: Mobility model in force
        world: World the run takes place in
        static_mask: nodes that never move (partially random)
        vertical_mask: V-nodes (1-d area constrained); the rest are H-nodes
        line_coords: fixed cross-coordinate of each node's line (1-d area constrained)
        home_points: (n, 2) home points (2-d area constrained)
    """
    spec: MobilitySpec
    world: WorldConfig
    static_mask: Optional[np.ndarray] = None
    vertical_mask: Optional[np.ndarray] = None
    line_coords: Optional[np.ndarray] = None
    home_points: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ('static_mask', 'vertical_mask', 'line_coords', 'home_points'):
            value = getattr(self, name)
            if value is not None:
                value = np.array(value, copy=True)
                value.setflags(write=False)
                object.__setattr__(self, name, value)


class BaseMobility(ABC):
    """
    Abstract base class for all mobility models.

    Randomness is addressed by stream path: initial positions use
    (TAG_INIT, 0), auxiliary data (TAG_INIT, TAG_AUX) and the move out of
    slot t uses (TAG_MOVE, t). Draws are shaped (n, ...) so row i is node
    i's own sub-stream for that slot.
    """

    def __init__(
        self,
        spec: MobilitySpec,
        world: WorldConfig,
        rejection_sampler: Optional[RejectionSampler] = None,
    ):
        """
        Initialize the model.

        Args:
            spec: Mobility specification; its kind must match the subclass
            world: World configuration
            rejection_sampler: Optional custom sampler for disk moves
        """
        if spec.kind is not self.get_kind():
            raise InvalidParameterError(
                f"{type(self).__name__} cannot run a {spec.kind.value} spec"
            )
        spec.validate(world.n)
        self.spec = spec
        self.world = world
        self.rejection_sampler = rejection_sampler or RejectionSampler()

    @property
    def n(self) -> int:
        return self.world.n

    @property
    def torus(self) -> bool:
        return self.world.boundary is Boundary.TORUS

    @abstractmethod
    def get_kind(self) -> MobilityKind:
        """Return the mobility kind implemented by the subclass."""
        pass

    @abstractmethod
    def init_state(self, rng: np.random.Generator) -> MobilityState:
        """Draw the auxiliary data (masks, lines, home points) for a run."""
        pass

    @abstractmethod
    def init_positions(self, state: MobilityState, stream: SeedStream) -> np.ndarray:
        """Draw (n, 2) positions from the model's stationary law."""
        pass

    @abstractmethod
    def move(self, state: MobilityState, positions: np.ndarray, stream: SeedStream) -> np.ndarray:
        """Return the (n, 2) positions after one move phase."""
        pass

    def state_for_layout(self, positions: np.ndarray, rng: np.random.Generator) -> MobilityState:
        """Auxiliary data consistent with a given pre-move layout."""
        return self.init_state(rng)

    @property
    def is_frozen(self) -> bool:
        """True when the move phase never changes any position."""
        return False

    def init_stationary(
        self,
        rng,
        layout: Optional[Snapshot] = None,
    ) -> Tuple[Snapshot, MobilityState]:
        """
        Draw the slot-0 snapshot and the run's auxiliary state.

        Args:
            rng: SeedStream or integer seed
            layout: Optional fixed pre-move layout to condition on

        Returns:
            Tuple of (Snapshot at slot 0, MobilityState)
        """
        stream = as_stream(rng)
        aux_rng = stream.child(TAG_INIT, TAG_AUX).generator()
        if layout is not None:
            if layout.n != self.n:
                raise InvalidParameterError(f"layout has {layout.n} nodes, world has {self.n}")
            state = self.state_for_layout(layout.positions, aux_rng)
            return Snapshot(layout.positions, 0), state

        state = self.init_state(aux_rng)
        positions = self.init_positions(state, stream.child(TAG_INIT, 0))
        return Snapshot(positions, 0), state

    def step(self, state: MobilityState, snap: Snapshot, rng) -> Snapshot:
        """
        Apply one move phase to a snapshot.

        Args:
            state: Auxiliary state from init_stationary
            snap: Snapshot at slot t
            rng: SeedStream or integer seed of the run

        Returns:
            Snapshot at slot t + 1
        """
        if snap.n != self.n:
            raise InvalidParameterError(f"snapshot has {snap.n} nodes, world has {self.n}")
        if self.is_frozen:
            return Snapshot(snap.positions, snap.slot + 1)
        stream = as_stream(rng).child(TAG_MOVE, snap.slot)
        positions = self.move(state, np.asarray(snap.positions), stream)
        return Snapshot(positions, snap.slot + 1)

    # Shared helpers

    def _uniform_positions(self, rng: np.random.Generator) -> np.ndarray:
        return rng.random((self.n, 2))

    def _disk_move(self, centres: np.ndarray, radius: float, stream: SeedStream, fallback: np.ndarray) -> np.ndarray:
        """Uniform point in the disk around each centre; wraps on a torus, rejects on a square."""
        if radius == 0:
            return np.array(centres, dtype=float, copy=True)
        if self.torus:
            rng = stream.generator()
            return np.mod(centres + uniform_disk_offsets(rng, (centres.shape[0],), radius), 1.0)
        return self.rejection_sampler.sample(centres, radius, stream, fallback)
