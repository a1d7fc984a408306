"""
Integration tests for configuration-driven experiment grids.
"""

import os

import pandas as pd
import pytest

from mobile_gossip.config.config_loader import ExperimentConfig, ModelEntry
from mobile_gossip.engine.theory import static_phi
from mobile_gossip.harness.experiment_runner import ExperimentRunner, run_experiment


def make_config(kind, models, n_values, workers=2, **experiment):
    """Small experiment configuration with quiet progress output."""
    config = ExperimentConfig()
    config.experiment.kind = kind
    config.experiment.n_values = list(n_values)
    for key, value in experiment.items():
        setattr(config.experiment, key, value)
    config.models = list(models)
    config.runtime.workers = workers
    config.progress.show_statistics = False
    return config


def metrics(rows, model=None):
    return {row.metric for row in rows if model is None or row.model == model}


def value(rows, metric, model=None):
    matches = [row for row in rows if row.metric == metric and (model is None or row.model == model)]
    assert len(matches) == 1, f"expected one {metric} row, got {len(matches)}"
    return matches[0]


class TestGrid:
    """Test grid construction."""

    def test_grid_order(self):
        """Points run over models, then n values."""
        config = make_config("spread", [ModelEntry(kind="static"), ModelEntry(kind="fully-random")], [20, 40])
        points = ExperimentRunner(config).grid()
        assert [(p.spec.label, p.world.n) for p in points] == [
            ("static", 20), ("static", 40), ("fully-random", 20), ("fully-random", 40),
        ]
        assert [p.index for p in points] == [0, 1, 2, 3]


class TestSpreadExperiment:
    """Test spreading-time experiments."""

    def test_metrics(self):
        """A completing model reports the spreading time and its references."""
        config = make_config("spread", [ModelEntry(kind="fully-random")], [64], rounds=6, sources=3)
        rows = run_experiment(config)
        assert metrics(rows) == {
            "completion_fraction", "mean_completion_slot", "min_completion_slot",
            "optimal_floor", "theory_phi", "theory_bound", "spreading_time",
        }
        assert value(rows, "completion_fraction").value == 1.0
        assert value(rows, "optimal_floor").value == 6
        assert value(rows, "spreading_time").value >= value(rows, "min_completion_slot").value
        assert all(row.seed == 0 and row.experiment == "spread" for row in rows)

    def test_independent_of_worker_count(self):
        """One worker and four workers give identical rows."""
        models = [ModelEntry(kind="velocity", v_max_over_r=0.5), ModelEntry(kind="partially-random", k_fraction=0.5)]
        one = run_experiment(make_config("spread", models, [48], workers=1, rounds=5, seed=3))
        four = run_experiment(make_config("spread", models, [48], workers=4, rounds=5, seed=3))
        assert one == four

    def test_seed_changes_results(self):
        """A different master seed gives different runs."""
        models = [ModelEntry(kind="fully-random")]
        a = ExperimentRunner(make_config("spread", models, [100], rounds=4, seed=1))
        b = ExperimentRunner(make_config("spread", models, [100], rounds=4, seed=2))
        a.run()
        b.run()
        assert [run.sizes for run in a.trajectories] != [run.sizes for run in b.trajectories]

    def test_single_round_has_no_std_error(self):
        """rounds = 1 leaves std_error empty."""
        config = make_config("spread", [ModelEntry(kind="fully-random")], [32], rounds=1)
        rows = run_experiment(config)
        assert value(rows, "completion_fraction").std_error is None
        assert value(rows, "completion_fraction").rounds == 1

    def test_censored_spreading_time(self):
        """A disconnected static network reports the horizon as censored."""
        config = make_config("spread", [ModelEntry(kind="static")], [20], rounds=3, max_slots=5)
        config.world.r = 0.01
        rows = run_experiment(config)
        assert "spreading_time" not in metrics(rows)
        assert value(rows, "spreading_time_censored").value == 5
        assert value(rows, "completion_fraction").value == 0.0

    def test_sweep_normalizes_by_log_n(self):
        """Sweeps add T(n) / log n."""
        config = make_config("sweep", [ModelEntry(kind="fully-random")], [32, 64], rounds=4)
        rows = run_experiment(config)
        ratios = [row for row in rows if row.metric == "spreading_time_over_log_n"]
        assert [row.n for row in ratios] == [32, 64]

    def test_failed_runs_reported(self, mocker):
        """Runs that raise become a failed_runs row; the grid completes."""
        mocker.patch(
            "mobile_gossip.harness.experiment_runner.run_spread",
            side_effect=RuntimeError("boom"),
        )
        config = make_config("spread", [ModelEntry(kind="static"), ModelEntry(kind="fully-random")], [16],
                             rounds=3)
        rows = run_experiment(config)
        failed = [row for row in rows if row.metric == "failed_runs"]
        assert [(row.model, row.value) for row in failed] == [("static", 3.0), ("fully-random", 3.0)]
        assert metrics(rows) == {"failed_runs"}

    def test_trajectory_dump(self, temp_dir):
        """Trajectories are dumped when requested."""
        config = make_config("spread", [ModelEntry(kind="fully-random")], [16], rounds=2)
        config.runtime.dump_trajectories = os.path.join(temp_dir, "trajectories.csv")
        run_experiment(config)
        frame = pd.read_csv(config.runtime.dump_trajectories)
        assert frame["run_id"].nunique() == 2
        assert frame.groupby("run_id")["informed_count"].max().tolist() == [16, 16]


class TestConductanceExperiment:
    """Test conductance experiments."""

    def test_square_grid_with_anchor(self, temp_dir):
        """Static and partially random points share the static anchor."""
        models = [ModelEntry(kind="static"), ModelEntry(kind="partially-random", k_fraction=0.25)]
        config = make_config("conductance", models, [40], samples=5, cuts=["bisect", "random"], random_cuts=2)
        config.runtime.dump_estimates = os.path.join(temp_dir, "estimates.csv")
        rows = run_experiment(config)

        expected = {
            "quotient_min", "edge_count_quotient_min", "theory_phi", "quotient_bisect",
            "edge_count_quotient_bisect", "crossing_edges_bisect", "anchored_phi",
        }
        assert metrics(rows, "static") == expected
        assert metrics(rows, "partially-random") == expected
        anchor = value(rows, "quotient_min", "static").value
        assert value(rows, "anchored_phi", "static").value == pytest.approx(anchor)
        assert value(rows, "quotient_min", "static").value <= value(rows, "quotient_bisect", "static").value

        estimates = pd.read_csv(config.runtime.dump_estimates)
        assert len(estimates) == 2 * 4

    def test_velocity_on_torus(self):
        """The velocity model adds its approximation and per-interface rows."""
        config = make_config("conductance", [ModelEntry(kind="velocity", v_max_over_r=0.5)], [30],
                             samples=3, cuts=["bisect"])
        config.world.boundary = "torus"
        rows = run_experiment(config)
        found = metrics(rows)
        for metric in ("velocity_phi", "contact_pairs_theory", "quotient_bisect_per_interface",
                       "crossing_edges_bisect_per_interface"):
            assert metric in found
        assert "anchored_phi" not in found
        bisect = value(rows, "quotient_bisect")
        assert value(rows, "quotient_bisect_per_interface").value == pytest.approx(bisect.value / 2)

    def test_conditioned_exhaustive(self):
        """Conditioned sampling supports exhaustive search on small n."""
        config = make_config("conductance", [ModelEntry(kind="velocity", v_max=0.1)], [8],
                             samples=3, cuts=["exhaustive"], sampling="conditioned")
        config.world.r = 0.5
        rows = run_experiment(config)
        assert metrics(rows) == {"quotient_min", "edge_count_quotient_min", "theory_phi", "velocity_phi"}

    def test_exhaustive_refused_reports_failure(self):
        """Too many nodes for exhaustive search fails that point only."""
        config = make_config("conductance", [ModelEntry(kind="fully-random")], [8, 16],
                             samples=2, cuts=["exhaustive"])
        rows = run_experiment(config)
        assert value(rows, "failed_runs").n == 16
        assert "quotient_min" in {row.metric for row in rows if row.n == 8}


class TestOtherExperiments:
    """Test density, increment and connectivity experiments."""

    def test_density(self):
        """Mixing fractions, predictions and their sup distance."""
        config = make_config("density", [ModelEntry(kind="velocity", v_max=0.1)], [200], bins=4,
                             node_samples=2000)
        config.world.boundary = "torus"
        rows = run_experiment(config)
        found = metrics(rows)
        assert "mixing_fraction@-0.07500" in found
        assert "predicted_fraction@+0.07500" in found
        assert 0.0 <= value(rows, "profile_sup_distance").value <= 1.0

    def test_increment(self):
        """Increments and their conductance bounds per informed fraction."""
        config = make_config("increment", [ModelEntry(kind="fully-random")], [60], samples=4,
                             informed_sets=3, informed_fractions=[0.25, 0.5])
        rows = run_experiment(config)
        for tag in ("0.25", "0.5"):
            assert value(rows, f"increment@{tag}").value > 0
            assert value(rows, f"increment_lower_bound@{tag}").value > 0
            assert value(rows, f"increment_bound_ratio_min@{tag}").rounds == 3

    def test_connectivity(self):
        """Connected fraction and the mobility-connectivity ratio."""
        config = make_config("connectivity", [ModelEntry(kind="static")], [50], trials=10)
        rows = run_experiment(config)
        fraction = value(rows, "connected_fraction")
        assert 0.0 <= fraction.value <= 1.0
        assert fraction.rounds == 10
        assert value(rows, "connectivity_ratio").value == pytest.approx(fraction.r / static_phi(50))
