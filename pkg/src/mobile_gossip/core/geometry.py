"""
Geometry

Unit-square world, distance semantics, the cell-grid spatial index and the
random geometric graph queries built on it: neighbor sets, crossing-edge
counts, per-cut contact quotients and connectivity.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Set

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order

from .errors import InvalidParameterError

logger = logging.getLogger(__name__)

MAX_RADIUS = math.sqrt(2.0)


class Boundary(Enum):
    """Distance semantics on the unit square."""
    SQUARE = "square"
    TORUS = "torus"


def default_radius(n: int) -> float:
    """Transmission radius r(n) = sqrt(8 log n / (pi n))."""
    if n < 2:
        raise InvalidParameterError(f"default radius needs n >= 2: {n}")
    return math.sqrt(8.0 * math.log(n) / (math.pi * n))


@dataclass(frozen=True)
class Position:
    """A point of the unit square."""
    x: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise InvalidParameterError(f"Position outside the unit square: ({self.x}, {self.y})")


@dataclass(frozen=True)
class WorldConfig:
    """
    Node count, transmission radius, boundary semantics and master seed.

    When ``r`` is omitted it follows r(n) = sqrt(8 log n / (pi n)).
    """
    n: int
    r: Optional[float] = None
    boundary: Boundary = Boundary.SQUARE
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameterError(f"n must be at least 2: {self.n}")
        if isinstance(self.boundary, str):
            object.__setattr__(self, 'boundary', Boundary(self.boundary))
        if self.r is None:
            object.__setattr__(self, 'r', default_radius(self.n))
        if not (0.0 < self.r <= MAX_RADIUS):
            raise InvalidParameterError(f"r must lie in (0, sqrt(2)]: {self.r}")
        if not (0 <= self.seed < 2 ** 64):
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer: {self.seed}")


@dataclass(frozen=True, eq=False)
class Snapshot:
    """
    Positions of all nodes at a slot boundary.

    Attributes:
        positions: float array of shape (n, 2), every row inside [0, 1]^2
        slot: time index t
    """
    positions: np.ndarray
    slot: int = 0

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise InvalidParameterError(f"positions must have shape (n, 2): {positions.shape}")
        if positions.size and (positions.min() < 0.0 or positions.max() > 1.0):
            raise InvalidParameterError("positions must lie inside the unit square")
        if self.slot < 0:
            raise InvalidParameterError(f"slot must be non-negative: {self.slot}")
        positions.setflags(write=False)
        object.__setattr__(self, 'positions', positions)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def position(self, i: int) -> Position:
        x, y = self.positions[i]
        return Position(float(x), float(y))

    @classmethod
    def from_points(cls, points: Iterable, slot: int = 0) -> "Snapshot":
        return cls(np.array(list(points), dtype=float).reshape(-1, 2), slot)


class NodeSet:
    """
    A subset of node ids stored as a dense boolean vector.

    Instances are treated as immutable; operations return new sets.
    """

    def __init__(self, members: np.ndarray):
        members = np.asarray(members, dtype=bool).copy()
        members.setflags(write=False)
        self.members = members
        self.size = int(members.sum())

    @property
    def n(self) -> int:
        return self.members.shape[0]

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]):
        members = np.zeros(n, dtype=bool)
        ids = list(ids)
        if ids:
            index = np.asarray(ids, dtype=int)
            if index.min() < 0 or index.max() >= n:
                raise InvalidParameterError(f"node id out of range for n={n}: {ids}")
            members[index] = True
        return cls(members)

    def ids(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def complement(self):
        return type(self)(~self.members)

    def __contains__(self, i: int) -> bool:
        return bool(self.members[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NodeSet):
            return NotImplemented
        return np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash(self.members.tobytes())

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={self.size}, n={self.n})"


class CutSet(NodeSet):
    """The node set S' of a cut; its complement is the other side."""

    def is_conductance_cut(self) -> bool:
        """True when 1 <= |S'| <= floor(n/2)."""
        return 1 <= self.size <= self.n // 2


def _wrap(delta: np.ndarray, boundary: Boundary) -> np.ndarray:
    if boundary is Boundary.TORUS:
        delta = np.abs(delta)
        return np.minimum(delta, 1.0 - delta)
    return delta


def displacement(a: np.ndarray, b: np.ndarray, boundary: Boundary) -> np.ndarray:
    """Row-wise distance between two (m, 2) coordinate arrays."""
    delta = _wrap(np.asarray(b, dtype=float) - np.asarray(a, dtype=float), Boundary(boundary))
    return np.hypot(delta[..., 0], delta[..., 1])


def distance(a: Position, b: Position, boundary: Boundary = Boundary.SQUARE) -> float:
    """
    Euclidean distance; under TORUS each coordinate difference wraps.

    Example: distance((0.05, 0.5), (0.95, 0.5), TORUS) == 0.1
    """
    return float(displacement(np.array([a.x, a.y]), np.array([b.x, b.y]), boundary))


class SpatialIndex:
    """
    Cell-grid index over the unit square for a fixed snapshot.

    Cells have side 1/floor(1/r) >= r, so every neighbor of a node lies in
    its own cell or one of the eight around it. The full neighbor relation
    (distance <= r, inclusive) is materialized once as CSR arrays.
    """

    def __init__(self, snapshot: Snapshot, r: float, boundary: Boundary = Boundary.SQUARE):
        if not r > 0:
            raise InvalidParameterError(f"r must be positive: {r}")
        self.snapshot = snapshot
        self.r = float(r)
        self.boundary = Boundary(boundary)
        self.n = snapshot.n
        self.cells_per_side = max(1, int(math.floor(1.0 / self.r)))
        self.cell_side = 1.0 / self.cells_per_side

        cell_xy = np.minimum(
            (snapshot.positions * self.cells_per_side).astype(np.int64),
            self.cells_per_side - 1,
        )
        self.cell_of = cell_xy[:, 0] * self.cells_per_side + cell_xy[:, 1]
        self._order = np.argsort(self.cell_of, kind='stable')
        sorted_cells = self.cell_of[self._order]
        all_cells = np.arange(self.cells_per_side ** 2)
        self._starts = np.searchsorted(sorted_cells, all_cells, side='left')
        self._ends = np.searchsorted(sorted_cells, all_cells, side='right')

        self.indptr, self.indices = self._build_neighbor_lists(cell_xy)
        self.degrees = np.diff(self.indptr)
        self._adjacency = None
        self._contacts = None

        logger.debug(
            f"Indexed {self.n} nodes in {self.cells_per_side}x{self.cells_per_side} cells, "
            f"{self.indices.size // 2} edges"
        )

    def _cell_offsets(self):
        m = self.cells_per_side
        if self.boundary is Boundary.TORUS:
            steps = sorted({d % m for d in (-1, 0, 1)})
        else:
            steps = [-1, 0, 1]
        return [(dx, dy) for dx in steps for dy in steps]

    def _build_neighbor_lists(self, cell_xy: np.ndarray):
        n, m = self.n, self.cells_per_side
        sources, targets = [], []
        node_ids = np.arange(n)

        for dx, dy in self._cell_offsets():
            cx = cell_xy[:, 0] + dx
            cy = cell_xy[:, 1] + dy
            if self.boundary is Boundary.TORUS:
                cx %= m
                cy %= m
                valid = np.ones(n, dtype=bool)
            else:
                valid = (cx >= 0) & (cx < m) & (cy >= 0) & (cy < m)
            nodes = node_ids[valid]
            cells = cx[valid] * m + cy[valid]
            starts = self._starts[cells]
            counts = self._ends[cells] - starts
            total = int(counts.sum())
            if total == 0:
                continue
            src = np.repeat(nodes, counts)
            offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            dst = self._order[np.repeat(starts, counts) + offsets]
            sources.append(src)
            targets.append(dst)

        if not sources:
            return np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)

        src = np.concatenate(sources)
        dst = np.concatenate(targets)
        keep = src != dst
        src, dst = src[keep], dst[keep]
        dist = displacement(self.snapshot.positions[src], self.snapshot.positions[dst], self.boundary)
        keep = dist <= self.r
        src, dst = src[keep], dst[keep]

        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return indptr, dst.astype(np.int64)

    def neighbors(self, i: int) -> Set[int]:
        if not 0 <= i < self.n:
            raise InvalidParameterError(f"node id out of range for n={self.n}: {i}")
        return set(int(j) for j in self.indices[self.indptr[i]:self.indptr[i + 1]])

    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix A."""
        if self._adjacency is None:
            data = np.ones(self.indices.size, dtype=float)
            self._adjacency = sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))
        return self._adjacency

    def contact_matrix(self) -> sparse.csr_matrix:
        """Contact probabilities P_ij = 1/|N_i| for j in N_i; zero rows for isolated nodes."""
        if self._contacts is None:
            weights = np.repeat(1.0 / np.maximum(self.degrees, 1), self.degrees)
            self._contacts = sparse.csr_matrix((weights, self.indices, self.indptr), shape=(self.n, self.n))
        return self._contacts

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        reached = breadth_first_order(self.adjacency(), 0, directed=False, return_predecessors=False)
        return reached.size == self.n


def _member_matrix(members: np.ndarray, n: int) -> np.ndarray:
    members = np.atleast_2d(np.asarray(members, dtype=bool))
    if members.shape[1] != n:
        raise InvalidParameterError(f"cut vectors must have length {n}: {members.shape}")
    return members


def crossing_edge_counts(index: SpatialIndex, members: np.ndarray) -> np.ndarray:
    """
    Number of edges between S' and its complement for each row of ``members``.

    Args:
        index: Spatial index of the (post-move) snapshot
        members: boolean array of shape (C, n) or (n,)

    Returns:
        float array of length C
    """
    members = _member_matrix(members, index.n)
    inside = members.T.astype(float)
    outside_degree = index.adjacency() @ (1.0 - inside)
    return (inside * outside_degree).sum(axis=0)


def cut_quotients(index: SpatialIndex, members: np.ndarray) -> np.ndarray:
    """
    Contact-probability cut quotient sum_{i in S', j not in S'} P_ij / |S'| per row.

    Isolated nodes contribute zero. Rows with |S'| = 0 yield nan.
    """
    members = _member_matrix(members, index.n)
    inside = members.T.astype(float)
    crossing_mass = index.contact_matrix() @ (1.0 - inside)
    sizes = members.sum(axis=1).astype(float)
    with np.errstate(invalid='ignore', divide='ignore'):
        return (inside * crossing_mass).sum(axis=0) / sizes


def build_index(snapshot: Snapshot, r: float, boundary: Boundary = Boundary.SQUARE) -> SpatialIndex:
    return SpatialIndex(snapshot, r, boundary)


def neighbors(index: SpatialIndex, i: int) -> Set[int]:
    return index.neighbors(i)


def crossing_edges(index: SpatialIndex, cut: CutSet) -> int:
    """Unordered edges {i, j} with i in the cut and j outside it."""
    if cut.n != index.n:
        raise InvalidParameterError(f"cut is over {cut.n} nodes, index over {index.n}")
    if cut.size == 0 or cut.size == cut.n:
        raise InvalidParameterError("cut and its complement must both be non-empty")
    return int(round(crossing_edge_counts(index, cut.members)[0]))


def is_connected(index: SpatialIndex) -> bool:
    return index.is_connected()
