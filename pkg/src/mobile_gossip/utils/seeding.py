"""
Seeding

Reproducible random streams. A SeedStream is a master seed plus a path of
integer keys; children extend the path, so every (seed, path) names one
independent numpy SeedSequence. Nothing in the package draws from a
global RNG.
"""

from typing import Tuple

import numpy as np

# Stream tags used by the simulator when deriving children
TAG_INIT = 0
TAG_MOVE = 1
TAG_GOSSIP = 2
TAG_AUX = 3
TAG_CUTS = 4
TAG_SAMPLE = 5


class SeedStream:
    """
    Deterministic, hierarchical source of numpy generators.

    Example:
        stream = SeedStream(7)
        rng = stream.child(3, 12).generator()   # point 3, replicate 12
    """

    def __init__(self, seed: int, path: Tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError(f"seed must be non-negative: {seed}")
        self.seed = int(seed)
        self.path = tuple(int(key) for key in path)

    def child(self, *keys: int) -> "SeedStream":
        """Return the sub-stream addressed by ``keys`` below this one."""
        return SeedStream(self.seed, self.path + tuple(keys))

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.default_rng(self.seed_sequence())

    @property
    def derived_seed(self) -> int:
        """64-bit integer seed summarizing this stream (for result rows)."""
        state = self.seed_sequence().generate_state(2, dtype=np.uint32)
        return int(state[0]) << 32 | int(state[1])

    def __repr__(self) -> str:
        return f"SeedStream(seed={self.seed}, path={self.path})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeedStream):
            return NotImplemented
        return self.seed == other.seed and self.path == other.path

    def __hash__(self) -> int:
        return hash((self.seed, self.path))


def as_stream(rng) -> SeedStream:
    """Accept a SeedStream or a plain integer seed."""
    if isinstance(rng, SeedStream):
        return rng
    return SeedStream(int(rng))
