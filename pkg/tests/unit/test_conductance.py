"""
Unit tests for mobile conductance estimation.
"""

import math

import numpy as np
import pandas as pd
import pytest

from mobile_gossip.core.errors import InvalidParameterError
from mobile_gossip.core.geometry import (
    Boundary,
    CutSet,
    Snapshot,
    WorldConfig,
    build_index,
    crossing_edges,
    cut_quotients,
)
from mobile_gossip.core.mobility_config import MobilityKind, MobilitySpec
from mobile_gossip.engine.conductance import (
    AxisCut,
    CutFamily,
    FamilyKind,
    FixedCut,
    QuotientKind,
    bisection,
    brute_force_min,
    contact_probability,
    edge_count_quotient,
    estimate_cut_quotient,
    estimates_frame,
    evaluate_family,
    exhaustive_cuts,
    expected_crossing_edges,
    minimize_over_family,
    mixing_profile,
    write_estimates,
)
from mobile_gossip.engine.theory import density_profile
from mobile_gossip.utils.seeding import SeedStream

STATIC = MobilitySpec(kind=MobilityKind.STATIC)
FULLY_RANDOM = MobilitySpec(kind=MobilityKind.FULLY_RANDOM)


@pytest.fixture
def layout():
    """Fixed layout of 40 nodes."""
    return Snapshot(np.random.default_rng(99).random((40, 2)))


class TestCutFamily:
    """Test cut family generation."""

    def test_generation_order(self):
        """Bisections, x sweeps, y sweeps, then random cuts."""
        family = CutFamily(["random", "sweep", "bisect"], offsets=3, random_count=2)
        ids = [rule.cut_id for rule in family.rules(10, 0)]
        assert ids == [
            "bisect-x", "bisect-y",
            "sweep-x-00", "sweep-x-01", "sweep-x-02",
            "sweep-y-00", "sweep-y-01", "sweep-y-02",
            "random-000", "random-001",
        ]

    def test_sweep_offsets_evenly_spaced(self):
        """Sweep lines sit at j / (offsets + 1)."""
        rules = CutFamily([FamilyKind.SWEEP], offsets=4).rules(10)
        assert [rule.offset for rule in rules[:4]] == pytest.approx([0.2, 0.4, 0.6, 0.8])
        assert all(rule.axis == 1 for rule in rules[4:])

    def test_random_cuts_balanced_and_reproducible(self):
        """Random cuts have floor(n/2) members and depend only on the stream."""
        family = CutFamily(["random"], random_count=5)
        first = family.rules(11, 3)
        second = family.rules(11, 3)
        for a, b in zip(first, second):
            assert a.members.sum() == 5
            assert np.array_equal(a.members, b.members)

    def test_exhaustive_cuts(self):
        """All subsets of size 1..n/2 in bit-mask order."""
        cuts = exhaustive_cuts(4)
        assert len(cuts) == 4 + 6
        assert cuts[0].cut_id == "subset-1"
        assert list(cuts[0].members) == [True, False, False, False]
        assert all(1 <= cut.members.sum() <= 2 for cut in cuts)

    def test_exhaustive_refused_for_large_n(self):
        """More than 14 nodes is refused."""
        with pytest.raises(InvalidParameterError):
            exhaustive_cuts(15)
        with pytest.raises(InvalidParameterError):
            CutFamily(["exhaustive"]).rules(15)

    def test_invalid_family(self):
        """Empty families and bad sizes are rejected."""
        with pytest.raises(InvalidParameterError):
            CutFamily([])
        with pytest.raises(InvalidParameterError):
            CutFamily(["sweep"], offsets=0)


class TestCutRules:
    """Test cut rule materialization."""

    def test_axis_cut_takes_smaller_side(self):
        """The side with at most n/2 nodes is returned."""
        positions = np.array([[0.1, 0.5], [0.2, 0.5], [0.3, 0.5], [0.9, 0.5]])
        assert list(bisection(0).materialize(positions)) == [False, False, False, True]
        assert list(AxisCut("c", 0, 0.25).materialize(positions)) == [True, True, False, False]

    def test_axis_interfaces(self):
        """A line has two interfaces on the torus, one on the square."""
        assert bisection(1).interfaces(Boundary.TORUS) == 2
        assert bisection(1).interfaces(Boundary.SQUARE) == 1
        assert FixedCut("f", np.array([True, False])).interfaces(Boundary.TORUS) is None

    def test_fixed_cut_size_mismatch(self):
        """A fixed cut only applies to layouts of its size."""
        rule = FixedCut("f", np.array([True, False, False]))
        with pytest.raises(InvalidParameterError):
            rule.materialize(np.zeros((4, 2)))


class TestCutQuotient:
    """Test single-cut estimates."""

    def test_static_conditioned_is_exact(self, layout):
        """Without motion every sample equals the layout's own quotient."""
        world = WorldConfig(n=40, r=0.25)
        cut = CutSet.from_ids(40, range(10))
        estimate = estimate_cut_quotient(world, STATIC, cut, 5, 0, layout=layout)
        expected = cut_quotients(build_index(layout, 0.25), cut.members)[0]
        assert estimate.mean == pytest.approx(expected)
        assert estimate.std_error == pytest.approx(0.0)
        assert estimate.samples == 5
        assert estimate.quotient_kind is QuotientKind.EXACT_PIJ
        assert estimate.cut == cut

    def test_reproducible(self, layout):
        """Same stream, same estimate."""
        world = WorldConfig(n=40, r=0.25)
        spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.1)
        cut = CutSet.from_ids(40, range(20))
        a = estimate_cut_quotient(world, spec, cut, 10, 5, layout=layout)
        b = estimate_cut_quotient(world, spec, cut, 10, 5, layout=layout)
        assert a == b

    def test_fully_random_torus_bisection(self):
        """Fully random mobility mixes the bisection almost completely."""
        world = WorldConfig(n=100, r=0.2, boundary=Boundary.TORUS)
        estimate = estimate_cut_quotient(world, FULLY_RANDOM, bisection(0), 50, 1)
        assert 0.35 < estimate.mean < 0.8
        assert estimate.interfaces == 2
        assert estimate.per_interface == pytest.approx(estimate.mean / 2)

    def test_empty_samples_skipped(self):
        """Samples where a geometric cut is empty are left out of the mean."""
        world = WorldConfig(n=4, r=0.5)
        estimate = estimate_cut_quotient(world, FULLY_RANDOM, AxisCut("edge", 0, 0.01), 20, 0)
        assert estimate.samples < 20

    def test_rejects_trivial_cuts(self):
        """Empty, full or mis-sized cuts are rejected."""
        world = WorldConfig(n=10)
        with pytest.raises(InvalidParameterError):
            estimate_cut_quotient(world, STATIC, CutSet.from_ids(10, []), 3, 0)
        with pytest.raises(InvalidParameterError):
            estimate_cut_quotient(world, STATIC, CutSet.from_ids(10, range(10)), 3, 0)
        with pytest.raises(InvalidParameterError):
            estimate_cut_quotient(world, STATIC, CutSet.from_ids(8, [0]), 3, 0)

    def test_rejects_zero_samples(self):
        """At least one sample is needed."""
        with pytest.raises(InvalidParameterError):
            estimate_cut_quotient(WorldConfig(n=10), STATIC, bisection(0), 0, 0)


class TestEdgeCount:
    """Test the edge-count quotient and crossing counts."""

    def test_contact_probability(self):
        """P(n, r) = 1 / (n pi r^2)."""
        assert contact_probability(WorldConfig(n=100, r=0.1)) == pytest.approx(1 / math.pi)

    def test_static_edge_count_quotient(self, layout):
        """Edge-count quotient is P(n, r) N_S' / |S'| on a frozen layout."""
        world = WorldConfig(n=40, r=0.25)
        cut = CutSet.from_ids(40, range(0, 40, 4))
        estimate = edge_count_quotient(world, STATIC, cut, 3, 0, layout=layout)
        edges = crossing_edges(build_index(layout, 0.25), cut)
        assert estimate.mean == pytest.approx(contact_probability(world) * edges / 10)
        assert estimate.quotient_kind is QuotientKind.EDGE_COUNT

    def test_expected_crossing_edges(self, layout):
        """The crossing estimate of a frozen layout is its crossing count."""
        world = WorldConfig(n=40, r=0.25)
        cut = CutSet.from_ids(40, range(15))
        estimate = expected_crossing_edges(world, STATIC, cut, 4, 0, layout=layout)
        assert estimate.mean == pytest.approx(crossing_edges(build_index(layout, 0.25), cut))
        assert estimate.samples == 4
        assert estimate.interfaces is None

    def test_fully_random_balanced_cut(self):
        """On a fully random torus E[N_S'] = |S'| |S'^c| pi r^2 for any fixed S'."""
        world = WorldConfig(n=1000, r=0.05, boundary=Boundary.TORUS)
        cut = CutSet.from_ids(1000, range(500))
        estimate = expected_crossing_edges(world, FULLY_RANDOM, cut, 200, SeedStream(5))
        assert estimate.mean == pytest.approx(500 * 500 * math.pi * 0.05 ** 2, rel=0.1)

    def test_cut_and_complement_cross_equally(self, random_snapshot):
        """A cut and its complement have the same crossing edges."""
        index = build_index(random_snapshot, 0.1)
        rng = np.random.default_rng(8)
        for _ in range(10):
            cut = CutSet(rng.random(200) < rng.uniform(0.1, 0.9))
            assert crossing_edges(index, cut) == crossing_edges(index, cut.complement())

        world = WorldConfig(n=200, r=0.1)
        spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.05)
        cut = CutSet.from_ids(200, range(0, 200, 3))
        a = expected_crossing_edges(world, spec, cut, 10, SeedStream(2))
        b = expected_crossing_edges(world, spec, cut.complement(), 10, SeedStream(2))
        assert a.mean == b.mean

    def test_quotient_ignores_node_labels(self, layout):
        """Relabeling nodes together with the cut leaves the quotient unchanged."""
        rng = np.random.default_rng(4)
        members = rng.random((5, 40)) < 0.4
        perm = rng.permutation(40)
        relabeled = Snapshot(layout.positions[perm])
        original = cut_quotients(build_index(layout, 0.25), members)
        permuted = cut_quotients(build_index(relabeled, 0.25), members[:, perm])
        assert np.allclose(original, permuted)

        world = WorldConfig(n=40, r=0.25)
        cut = CutSet(members[0])
        a = estimate_cut_quotient(world, STATIC, cut, 2, 0, layout=layout)
        b = estimate_cut_quotient(world, STATIC, CutSet(members[0][perm]), 2, 0, layout=relabeled)
        assert a.mean == pytest.approx(b.mean)


class TestMinimization:
    """Test family minimization."""

    def test_family_estimates_in_order(self, layout):
        """One estimate per rule, in generation order."""
        world = WorldConfig(n=40, r=0.25)
        estimates = evaluate_family(world, STATIC, CutFamily(["bisect", "random"], random_count=3), 2, 0,
                                    layout=layout)
        assert [e.cut_id for e in estimates] == ["bisect-x", "bisect-y", "random-000", "random-001", "random-002"]

    def test_minimum_is_smallest_mean(self, layout):
        """The returned estimate has the smallest mean of the family."""
        world = WorldConfig(n=40, r=0.25)
        spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.05)
        family = CutFamily(["bisect", "sweep"], offsets=5)
        estimates = evaluate_family(world, spec, family, 10, 2, layout=layout)
        cut, best = minimize_over_family(world, spec, family, 10, 2, layout=layout)
        assert best.mean == pytest.approx(min(e.mean for e in estimates if e.samples > 0))
        assert cut == best.cut

    def test_brute_force_lower_than_family(self):
        """Exhaustive search on shared samples never loses to a subfamily."""
        world = WorldConfig(n=8, r=0.5, seed=4)
        spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.1)
        layout = Snapshot(np.random.default_rng(4).random((8, 2)))
        _, family_best = minimize_over_family(world, spec, CutFamily(["bisect", "random"]), 20, 6,
                                              layout=layout)
        cut, brute_best = brute_force_min(world, spec, 20, 6, layout=layout)
        assert brute_best.mean <= family_best.mean + 1e-12
        assert 1 <= cut.size <= 4

    def test_brute_force_refused_for_large_n(self):
        """brute_force_min refuses n > 14."""
        with pytest.raises(InvalidParameterError):
            brute_force_min(WorldConfig(n=15), STATIC, 1, 0)


class TestMixingProfile:
    """Test the empirical post-move mixing profile."""

    def test_velocity_profile_matches_prediction(self):
        """Binned left-side fractions follow the predicted density profile."""
        world = WorldConfig(n=500, boundary=Boundary.TORUS)
        spec = MobilitySpec(kind=MobilityKind.VELOCITY_CONSTRAINED, v_max=0.1)
        profile = mixing_profile(world, spec, 10, 200000, 8)
        predicted = density_profile(profile.bin_centres, 0.1)
        assert profile.node_samples == 200000
        assert np.all(profile.counts > 0)
        assert np.max(np.abs(profile.fractions - predicted)) < 0.05

    def test_static_profile_is_a_step(self):
        """Without motion the profile is one left of the line and zero right of it."""
        world = WorldConfig(n=200)
        profile = mixing_profile(world, STATIC, 10, 2000, 0)
        assert np.all(profile.fractions[:5] == 1.0)
        assert np.all(profile.fractions[5:] == 0.0)
        assert profile.bin_centres[-1] < world.r

    def test_invalid_arguments(self):
        """Bins and sample counts must be positive."""
        with pytest.raises(InvalidParameterError):
            mixing_profile(WorldConfig(n=10), STATIC, 0, 100, 0)


class TestEstimateDump:
    """Test the estimates CSV."""

    def test_frame_and_file(self, layout, temp_dir):
        """One row per estimate with the documented columns."""
        world = WorldConfig(n=40, r=0.25)
        estimates = evaluate_family(world, STATIC, CutFamily(["bisect"]), 2, 0, layout=layout)
        frame = estimates_frame(estimates)
        assert list(frame.columns) == [
            "model", "n", "r", "param", "cut_id", "quotient_kind", "mean", "std_error", "samples",
        ]
        assert frame["cut_id"].tolist() == ["bisect-x", "bisect-y"]

        path = f"{temp_dir}/estimates.csv"
        write_estimates(estimates, path)
        assert pd.read_csv(path)["quotient_kind"].tolist() == ["exact", "exact"]
