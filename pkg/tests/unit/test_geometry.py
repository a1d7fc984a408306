"""
Unit tests for world geometry and the spatial index.
"""

import math

import numpy as np
import pytest

from mobile_gossip.core.errors import InvalidParameterError
from mobile_gossip.core.geometry import (
    Boundary,
    CutSet,
    NodeSet,
    Position,
    Snapshot,
    WorldConfig,
    build_index,
    crossing_edge_counts,
    crossing_edges,
    cut_quotients,
    default_radius,
    displacement,
    distance,
    is_connected,
    neighbors,
)


def brute_force_neighbors(positions, r, boundary):
    """Reference neighbor sets from the full distance matrix."""
    delta = positions[:, None, :] - positions[None, :, :]
    if boundary is Boundary.TORUS:
        delta = np.abs(delta)
        delta = np.minimum(delta, 1.0 - delta)
    dist = np.hypot(delta[..., 0], delta[..., 1])
    n = positions.shape[0]
    return [set(int(j) for j in np.flatnonzero(dist[i] <= r) if j != i) for i in range(n)]


class TestWorldConfig:
    """Test world configuration validation."""

    def test_default_radius(self):
        """Default radius follows sqrt(8 log n / (pi n))."""
        assert default_radius(1000) == pytest.approx(0.13263, rel=1e-3)
        assert WorldConfig(n=1000).r == pytest.approx(default_radius(1000))

    def test_explicit_radius_kept(self):
        """An explicit radius is not replaced."""
        assert WorldConfig(n=10, r=0.3).r == 0.3

    def test_boundary_from_string(self):
        """Boundary names are coerced to the enum."""
        assert WorldConfig(n=10, boundary="torus").boundary is Boundary.TORUS

    @pytest.mark.parametrize("kwargs", [
        {"n": 1},
        {"n": 10, "r": 0.0},
        {"n": 10, "r": 1.5},
        {"n": 10, "seed": -1},
        {"n": 10, "seed": 2 ** 64},
    ])
    def test_invalid_world(self, kwargs):
        """Out-of-range parameters are rejected."""
        with pytest.raises(InvalidParameterError):
            WorldConfig(**kwargs)


class TestSnapshot:
    """Test snapshot construction."""

    def test_from_points(self, line_snapshot):
        """Points become an (n, 2) read-only array."""
        assert line_snapshot.n == 4
        assert line_snapshot.position(3) == Position(0.8, 0.5)
        with pytest.raises(ValueError):
            line_snapshot.positions[0, 0] = 0.0

    def test_rejects_points_outside_square(self):
        """Coordinates must lie in [0, 1]."""
        with pytest.raises(InvalidParameterError):
            Snapshot.from_points([(0.5, 0.5), (1.2, 0.5)])

    def test_rejects_bad_shape(self):
        """Positions need two columns."""
        with pytest.raises(InvalidParameterError):
            Snapshot(np.zeros((3, 3)))

    def test_position_validation(self):
        """Positions outside the square are rejected."""
        with pytest.raises(InvalidParameterError):
            Position(-0.1, 0.5)


class TestDistance:
    """Test distance semantics."""

    def test_square_distance(self):
        """Plain Euclidean distance on the square."""
        assert distance(Position(0.0, 0.0), Position(0.3, 0.4)) == pytest.approx(0.5)

    def test_torus_wraps(self):
        """Coordinate differences wrap on the torus."""
        a, b = Position(0.05, 0.5), Position(0.95, 0.5)
        assert distance(a, b, Boundary.TORUS) == pytest.approx(0.1)
        assert distance(a, b, Boundary.SQUARE) == pytest.approx(0.9)

    def test_torus_never_longer(self):
        """Wrapping can only shorten a distance."""
        rng = np.random.default_rng(14)
        for a, b in zip(rng.random((200, 2)), rng.random((200, 2))):
            a, b = Position(*a), Position(*b)
            assert distance(a, b, Boundary.TORUS) <= distance(a, b, Boundary.SQUARE) + 1e-12
        points = rng.random((2, 500, 2))
        assert np.all(displacement(*points, Boundary.TORUS) <= displacement(*points, Boundary.SQUARE) + 1e-12)

    def test_displacement_rowwise(self):
        """displacement works on whole coordinate arrays."""
        a = np.array([[0.0, 0.0], [0.1, 0.1]])
        b = np.array([[0.0, 0.5], [0.1, 0.1]])
        assert np.allclose(displacement(a, b, Boundary.SQUARE), [0.5, 0.0])


class TestSpatialIndex:
    """Test neighbor queries."""

    def test_radius_is_inclusive(self):
        """Nodes exactly r apart are neighbors."""
        snap = Snapshot.from_points([(0.25, 0.5), (0.5, 0.5)])
        index = build_index(snap, 0.25)
        assert neighbors(index, 0) == {1}
        assert neighbors(index, 1) == {0}

    @pytest.mark.parametrize("boundary", [Boundary.SQUARE, Boundary.TORUS])
    @pytest.mark.parametrize("r", [0.05, 0.1, 0.3, 0.7])
    def test_matches_brute_force(self, random_snapshot, boundary, r):
        """Cell-grid neighbor sets equal the full pairwise check."""
        index = build_index(random_snapshot, r, boundary)
        expected = brute_force_neighbors(random_snapshot.positions, r, boundary)
        for i in range(random_snapshot.n):
            assert index.neighbors(i) == expected[i]

    def test_symmetric_and_irreflexive(self, random_snapshot):
        """j in N(i) iff i in N(j), and i is never its own neighbor."""
        index = build_index(random_snapshot, 0.12)
        for i in range(random_snapshot.n):
            nbrs = index.neighbors(i)
            assert i not in nbrs
            for j in nbrs:
                assert i in index.neighbors(j)

    def test_torus_neighbors_across_edge(self):
        """Torus neighbors are found across the wrap-around."""
        snap = Snapshot.from_points([(0.02, 0.5), (0.98, 0.5), (0.5, 0.5)])
        assert build_index(snap, 0.1, Boundary.TORUS).neighbors(0) == {1}
        assert build_index(snap, 0.1, Boundary.SQUARE).neighbors(0) == set()

    def test_neighbor_out_of_range(self, line_snapshot):
        """Unknown node ids are rejected."""
        with pytest.raises(InvalidParameterError):
            build_index(line_snapshot, 0.15).neighbors(4)

    def test_contact_matrix_rows(self, line_snapshot):
        """Rows of P sum to one, isolated nodes have zero rows."""
        index = build_index(line_snapshot, 0.15)
        row_sums = np.asarray(index.contact_matrix().sum(axis=1)).ravel()
        assert np.allclose(row_sums, [1.0, 1.0, 1.0, 0.0])
        assert index.contact_matrix()[1, 0] == pytest.approx(0.5)

    def test_degrees(self, line_snapshot):
        """Degrees follow the line layout."""
        index = build_index(line_snapshot, 0.15)
        assert list(index.degrees) == [1, 2, 1, 0]


class TestCuts:
    """Test crossing edges and cut quotients."""

    def test_node_sets(self):
        """NodeSet ids, complement and size."""
        s = NodeSet.from_ids(5, [0, 3])
        assert s.size == 2
        assert list(s.ids()) == [0, 3]
        assert list(s.complement().ids()) == [1, 2, 4]
        assert 3 in s and 1 not in s
        assert s == NodeSet.from_ids(5, [3, 0])

    def test_node_set_out_of_range(self):
        """Ids outside [0, n) are rejected."""
        with pytest.raises(InvalidParameterError):
            NodeSet.from_ids(3, [3])

    def test_conductance_cut_sizes(self):
        """Only 1 <= |S'| <= n/2 qualifies."""
        assert CutSet.from_ids(5, [0, 1]).is_conductance_cut()
        assert not CutSet.from_ids(5, [0, 1, 2]).is_conductance_cut()
        assert not CutSet.from_ids(5, []).is_conductance_cut()

    def test_crossing_edges(self, line_snapshot):
        """Unordered crossing edges of simple cuts."""
        index = build_index(line_snapshot, 0.15)
        assert crossing_edges(index, CutSet.from_ids(4, [0])) == 1
        assert crossing_edges(index, CutSet.from_ids(4, [1])) == 2
        assert crossing_edges(index, CutSet.from_ids(4, [0, 3])) == 1

    def test_crossing_edges_rejects_trivial_cut(self, line_snapshot):
        """Empty or full cuts are rejected."""
        index = build_index(line_snapshot, 0.15)
        with pytest.raises(InvalidParameterError):
            crossing_edges(index, CutSet.from_ids(4, []))
        with pytest.raises(InvalidParameterError):
            crossing_edges(index, CutSet.from_ids(4, [0, 1, 2, 3]))

    def test_cut_quotients(self, line_snapshot):
        """Quotient sums 1/|N_i| over crossing pairs divided by |S'|."""
        index = build_index(line_snapshot, 0.15)
        members = np.array([
            [True, False, False, False],
            [False, True, False, False],
            [True, False, False, True],
        ])
        assert np.allclose(cut_quotients(index, members), [1.0, 1.0, 0.5])

    def test_batched_counts_match_single(self, random_snapshot):
        """Batched crossing counts equal one-by-one counts."""
        index = build_index(random_snapshot, 0.1)
        rng = np.random.default_rng(0)
        members = rng.random((5, random_snapshot.n)) < 0.3
        batched = crossing_edge_counts(index, members)
        for c in range(5):
            assert batched[c] == crossing_edges(index, CutSet(members[c]))

    def test_crossing_count_by_hand(self, random_snapshot):
        """Crossing counts equal a direct double loop."""
        index = build_index(random_snapshot, 0.1)
        cut = CutSet(random_snapshot.positions[:, 0] < 0.5)
        expected = sum(
            1 for i in cut.ids() for j in index.neighbors(int(i)) if j not in cut
        )
        assert crossing_edges(index, cut) == expected


class TestConnectivity:
    """Test connectivity checks."""

    def test_disconnected(self, line_snapshot):
        """A far node disconnects the graph."""
        assert not is_connected(build_index(line_snapshot, 0.15))

    def test_connected(self, line_snapshot):
        """A large radius connects everything."""
        assert is_connected(build_index(line_snapshot, 0.75))

    def test_dense_graph_connected(self, random_snapshot):
        """200 uniform nodes at twice the default radius are connected."""
        r = 2 * default_radius(200)
        assert math.isfinite(r)
        assert build_index(random_snapshot, r).is_connected()

    def test_default_radius_connects_almost_always(self):
        """At least 99 of 100 uniform layouts are connected at the default radius."""
        world = WorldConfig(n=500)
        rng = np.random.default_rng(2024)
        connected = sum(
            is_connected(build_index(Snapshot(rng.random((world.n, 2))), world.r, world.boundary))
            for _ in range(100)
        )
        assert connected >= 99
