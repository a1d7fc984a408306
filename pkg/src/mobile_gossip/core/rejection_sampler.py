"""
Rejection Sampler

Bounded-attempt rejection sampling of per-node displacements inside a
region. Each attempt draws a fixed batch of proposals for every pending
node from its own sub-stream, so a node's result depends only on its own
row of draws and never on how many other nodes were rejected.
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..utils.seeding import SeedStream

logger = logging.getLogger(__name__)


def uniform_disk_offsets(rng: np.random.Generator, shape, radius: float) -> np.ndarray:
    """Offsets uniform on the disk of the given radius; returns shape + (2,)."""
    rho = radius * np.sqrt(rng.random(shape))
    theta = 2.0 * np.pi * rng.random(shape)
    return np.stack((rho * np.cos(theta), rho * np.sin(theta)), axis=-1)


class RejectionSampler:
    """
    Draws centre + uniform-disk offsets until they land inside the square.

    Nodes still rejected after ``max_attempts`` keep their fallback
    position, which the caller guarantees to be valid.
    """

    def __init__(self, batch_size: int = 8, max_attempts: int = 32):
        """
        Initialize the sampler.

        Args:
            batch_size: Proposals drawn per node per attempt
            max_attempts: Maximum number of batches before falling back
        """
        self.batch_size = batch_size
        self.max_attempts = max_attempts

    def sample(
        self,
        centres: np.ndarray,
        radius: float,
        stream: SeedStream,
        fallback: np.ndarray,
        accept: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    ) -> np.ndarray:
        """
        Sample one accepted point per centre.

        Args:
            centres: (n, 2) disk centres
            radius: disk radius
            stream: stream for this move; attempt a uses stream.child(a)
            fallback: (n, 2) positions kept when every proposal is rejected
            accept: predicate on (..., 2) proposals, default inside [0, 1]^2

        Returns:
            (n, 2) array of accepted points
        """
        if accept is None:
            accept = _inside_unit_square

        n = centres.shape[0]
        result = np.array(fallback, dtype=float, copy=True)
        pending = np.ones(n, dtype=bool)

        for attempt in range(self.max_attempts):
            rng = stream.child(attempt).generator()
            proposals = centres[:, None, :] + uniform_disk_offsets(rng, (n, self.batch_size), radius)
            ok = accept(proposals) & pending[:, None]
            hit = ok.any(axis=1)
            first = np.argmax(ok, axis=1)
            rows = np.flatnonzero(hit)
            result[rows] = proposals[rows, first[rows]]
            pending &= ~hit
            if not pending.any():
                return result

        logger.warning(
            f"{int(pending.sum())} node(s) rejected after {self.max_attempts} attempts, keeping fallback"
        )
        return result


def _inside_unit_square(points: np.ndarray) -> np.ndarray:
    return ((points >= 0.0) & (points <= 1.0)).all(axis=-1)
