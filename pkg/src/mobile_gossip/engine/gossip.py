"""
Gossip

The move-and-gossip slot loop. Every slot each node first moves, then
contacts one neighbor of its new position chosen uniformly at random;
contacts with an informed endpoint deliver the message by push or pull.
S(t) only changes at the end of a slot, so all deliveries of a round are
evaluated against the informed set at the start of that round.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..core.errors import InvalidParameterError
from ..core.geometry import NodeSet, SpatialIndex, WorldConfig, build_index
from ..core.mobility_config import MobilitySpec
from ..mobility.registry import create_mobility
from ..utils.file_operations import write_table
from ..utils.seeding import TAG_GOSSIP, TAG_SAMPLE, SeedStream, as_stream
from ..utils.statistics import mean_and_stderr
from .theory import table1_phi

logger = logging.getLogger(__name__)

MAX_SLOTS_CAP = 1_000_000
TRAJECTORY_COLUMNS = ["run_id", "source", "seed", "slot", "informed_count"]


class GossipMode(Enum):
    """Which contact directions deliver the message."""
    PUSH_PULL = "pushpull"
    PUSH_ONLY = "push"
    PULL_ONLY = "pull"


class InformedSet(NodeSet):
    """The informed set S(t)."""

    @classmethod
    def single(cls, n: int, source: int) -> "InformedSet":
        if not 0 <= source < n:
            raise InvalidParameterError(f"source out of range for n={n}: {source}")
        return cls.from_ids(n, [source])

    def is_complete(self) -> bool:
        return self.size == self.n


@dataclass(frozen=True)
class SpreadTrajectory:
    """
    Outcome of one spreading run.

    Attributes:
        sizes: |S(t)| for t = 0, 1, ... up to the last simulated slot
        completion_slot: first slot with |S(t)| = n, or None
        source: Initially informed node
        seed: Seed of the run's stream
    """
    sizes: tuple
    completion_slot: Optional[int]
    source: int
    seed: int

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, 'sizes', sizes)
        if not sizes or sizes[0] != 1:
            raise InvalidParameterError("a trajectory starts with exactly one informed node")
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise InvalidParameterError("informed set sizes must be non-decreasing")

    @property
    def slots(self) -> int:
        """Number of simulated slots."""
        return len(self.sizes) - 1

    @property
    def completed(self) -> bool:
        return self.completion_slot is not None

    def size_at(self, t: int) -> int:
        """|S(t)|; past the end of the run the last size persists."""
        return self.sizes[min(t, len(self.sizes) - 1)]


@dataclass(frozen=True)
class IncrementEstimate:
    """Monte-Carlo estimate of E[|S(t+1)| - |S(t)| given S(t)]."""
    mean: float
    std_error: Optional[float]
    samples: int
    informed_size: int


def draw_contacts(index: SpatialIndex, rng) -> np.ndarray:
    """
    Contact target of every node, or -1 for isolated nodes.

    Node i uses the i-th uniform draw, so its choice depends only on its
    own row of the stream.

    Args:
        index: Spatial index of the post-move snapshot
        rng: numpy Generator, SeedStream or integer seed
    """
    if not isinstance(rng, np.random.Generator):
        rng = as_stream(rng).generator()
    u = rng.random(index.n)
    degrees = index.degrees
    has_neighbor = degrees > 0
    pick = np.minimum((u * degrees).astype(np.int64), np.maximum(degrees - 1, 0))
    targets = np.full(index.n, -1, dtype=np.int64)
    targets[has_neighbor] = index.indices[index.indptr[:-1][has_neighbor] + pick[has_neighbor]]
    return targets


def deliver(informed: InformedSet, targets: np.ndarray, mode: GossipMode) -> InformedSet:
    """
    Apply one round of contacts to the informed set.

    Args:
        informed: S at the start of the round
        targets: contact target per node (-1 for none)
        mode: Which contact directions deliver

    Returns:
        The informed set at the end of the round (a superset of ``informed``)
    """
    mode = GossipMode(mode)
    before = informed.members
    after = before.copy()
    initiators = np.flatnonzero(targets >= 0)
    contacted = targets[initiators]

    if mode in (GossipMode.PUSH_PULL, GossipMode.PUSH_ONLY):
        after[contacted[before[initiators]]] = True
    if mode in (GossipMode.PUSH_PULL, GossipMode.PULL_ONLY):
        after[initiators[before[contacted]]] = True
    return InformedSet(after)


def gossip_round(index: SpatialIndex, informed: InformedSet, mode: GossipMode, rng) -> InformedSet:
    """One gossip phase on the post-move graph."""
    if informed.n != index.n:
        raise InvalidParameterError(f"informed set is over {informed.n} nodes, index over {index.n}")
    return deliver(informed, draw_contacts(index, rng), mode)


def run_spread(
    world: WorldConfig,
    spec: MobilitySpec,
    source: int,
    mode: GossipMode,
    max_slots: int,
    rng,
) -> SpreadTrajectory:
    """
    Simulate one spreading run from a single source.

    Each slot applies the move phase, rebuilds the spatial index of the
    new positions and runs one gossip round. The run stops when every node
    is informed or after ``max_slots`` slots; an incomplete run is returned
    with completion_slot None.

    Args:
        world: World configuration
        spec: Mobility model
        source: Initially informed node
        mode: Gossip mode
        max_slots: Maximum number of slots to simulate
        rng: SeedStream or integer seed of the run
    """
    if max_slots < 1:
        raise InvalidParameterError(f"max_slots must be at least 1: {max_slots}")
    stream = as_stream(rng)
    mode = GossipMode(mode)
    mobility = create_mobility(spec, world)
    informed = InformedSet.single(world.n, source)

    snap, state = mobility.init_stationary(stream)
    sizes = [informed.size]
    index = None

    for t in range(max_slots):
        snap = mobility.step(state, snap, stream)
        if index is None or not mobility.is_frozen:
            index = build_index(snap, world.r, world.boundary)
        informed = gossip_round(index, informed, mode, stream.child(TAG_GOSSIP, t))
        sizes.append(informed.size)
        if informed.is_complete():
            break

    completion_slot = len(sizes) - 1 if sizes[-1] == world.n else None
    if completion_slot is None:
        logger.debug(
            f"Run from source {source} incomplete after {max_slots} slots ({sizes[-1]}/{world.n} informed)"
        )
    return SpreadTrajectory(
        sizes=tuple(sizes),
        completion_slot=completion_slot,
        source=source,
        seed=stream.derived_seed,
    )


def spreading_time(runs: Iterable[SpreadTrajectory], epsilon: float) -> Optional[int]:
    """
    Empirical epsilon-spreading time.

    For each source, the smallest slot t at which the fraction of its runs
    not yet complete is at most epsilon; the result is the maximum over
    sources, or None if some source never reaches that within its recorded
    runs.

    Raises:
        InvalidParameterError: for no runs or epsilon outside (0, 1)
    """
    runs = list(runs)
    if not runs:
        raise InvalidParameterError("spreading time needs at least one run")
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1): {epsilon}")

    by_source = defaultdict(list)
    for run in runs:
        by_source[run.source].append(run.completion_slot)

    worst = 0
    for source in sorted(by_source):
        completions = by_source[source]
        total = len(completions)
        allowed = epsilon * total + 1e-9
        finite = sorted(c for c in completions if c is not None)
        per_source = None
        for done, slot in enumerate(finite, start=1):
            if total - done <= allowed and (done == len(finite) or finite[done] != slot):
                per_source = slot
                break
        if per_source is None:
            return None
        worst = max(worst, per_source)
    return worst


def increment_estimate(
    world: WorldConfig,
    spec: MobilitySpec,
    informed: InformedSet,
    mode: GossipMode,
    samples: int,
    rng,
) -> IncrementEstimate:
    """
    Monte-Carlo estimate of the expected one-slot growth of a fixed S(t).

    Every sample draws a fresh stationary layout, applies one move and one
    gossip round, and records |S(t+1)| - |S(t)|.

    Raises:
        InvalidParameterError: for samples < 1 or an empty informed set
    """
    if samples < 1:
        raise InvalidParameterError(f"samples must be at least 1: {samples}")
    if informed.n != world.n:
        raise InvalidParameterError(f"informed set is over {informed.n} nodes, world has {world.n}")
    if informed.size == 0:
        raise InvalidParameterError("informed set must not be empty")

    stream = as_stream(rng)
    mode = GossipMode(mode)
    mobility = create_mobility(spec, world)
    increments = np.zeros(samples)

    for s in range(samples):
        sample_stream = stream.child(TAG_SAMPLE, s)
        snap, state = mobility.init_stationary(sample_stream)
        after = mobility.step(state, snap, sample_stream)
        index = build_index(after, world.r, world.boundary)
        grown = gossip_round(index, informed, mode, sample_stream.child(TAG_GOSSIP, 0))
        increments[s] = grown.size - informed.size

    mean, std_error = mean_and_stderr(increments)
    return IncrementEstimate(mean=mean, std_error=std_error, samples=samples, informed_size=informed.size)


def default_max_slots(world: WorldConfig, spec: MobilitySpec, epsilon: float) -> int:
    """200 * (log n + log(1/epsilon)) / phi for the model's predicted phi, capped at 10^6."""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1): {epsilon}")
    phi = table1_phi(spec, world.n, world.r).phi
    if phi <= 0:
        return MAX_SLOTS_CAP
    slots = math.ceil(200.0 * (math.log(world.n) + math.log(1.0 / epsilon)) / phi)
    return int(min(max(slots, 1), MAX_SLOTS_CAP))


def trajectories_frame(trajectories: Sequence[SpreadTrajectory]) -> pd.DataFrame:
    """One row per (run, slot), runs ordered by (source, seed)."""
    ordered = sorted(trajectories, key=lambda run: (run.source, run.seed))
    records = [
        (run_id, run.source, run.seed, slot, size)
        for run_id, run in enumerate(ordered)
        for slot, size in enumerate(run.sizes)
    ]
    return pd.DataFrame.from_records(records, columns=TRAJECTORY_COLUMNS)


def write_trajectories(trajectories: Sequence[SpreadTrajectory], path: Optional[Union[str, Path]]):
    """Dump trajectories as CSV `run_id,source,seed,slot,informed_count`."""
    write_table(trajectories_frame(trajectories), path)
