"""
Experiment Runner

Configuration-driven experiment grids. A grid point is one (model, n)
pair; every replicate at a point draws from its own stream derived from
(master seed, point index, replicate index), so results do not depend on
how tasks are scheduled across workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from ..config.config_loader import ExperimentConfig, ExperimentKind, ModelEntry
from ..core.geometry import CutSet, WorldConfig, build_index
from ..core.mobility_config import MobilityKind, MobilitySpec
from ..engine.conductance import (
    ConductanceEstimate,
    CutFamily,
    edge_count_quotient,
    estimate_cut_quotient,
    evaluate_family,
    expected_crossing_edges,
    mixing_profile,
    write_estimates,
)
from ..engine.gossip import (
    GossipMode,
    InformedSet,
    SpreadTrajectory,
    default_max_slots,
    increment_estimate,
    run_spread,
    spreading_time,
    write_trajectories,
)
from ..engine.theory import (
    anchored_table1_phi,
    contact_pairs_integral,
    density_profile,
    mobility_connectivity_ratio,
    optimal_time_floor,
    spreading_time_bound,
    table1_phi,
    velocity_phi,
)
from ..mobility.registry import create_mobility
from ..utils.progress_tracker import ProgressTracker
from ..utils.seeding import TAG_INIT, SeedStream
from ..utils.statistics import mean_and_stderr
from .result_writer import ResultRow

logger = logging.getLogger(__name__)

# Cap on simulated slots per run, as a multiple of n
HARNESS_SLOTS_PER_NODE = 50


@dataclass(frozen=True)
class GridPoint:
    """One (model, n) combination of the grid."""
    index: int
    entry: ModelEntry
    world: WorldConfig
    spec: MobilitySpec

    @property
    def label(self) -> str:
        return f"{self.spec.describe()} n={self.world.n}"


@dataclass(frozen=True)
class TaskFailure:
    """Placeholder result of a task that raised."""
    error: str


class ExperimentRunner:
    """
    Runs one experiment grid and aggregates it into ResultRows.

    Tasks are executed on a thread pool; aggregation always walks the
    results in grid order, so the output is independent of completion
    order and worker count.
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize the runner.

        Args:
            config: Validated experiment configuration
        """
        self.config = config
        self.master = SeedStream(config.seed)
        self.mode = GossipMode(config.experiment.mode)
        self.trajectories: List[SpreadTrajectory] = []
        self.estimates: List[ConductanceEstimate] = []

    @property
    def experiment(self) -> str:
        return self.config.experiment.kind

    def grid(self) -> List[GridPoint]:
        """Grid points in deterministic (model, n) order."""
        points = []
        for entry in self.config.models:
            for n in self.config.experiment.n_values:
                world = self.config.world_for(n)
                spec = entry.resolve(n, world.r)
                points.append(GridPoint(index=len(points), entry=entry, world=world, spec=spec))
        return points

    def run(self) -> List[ResultRow]:
        """
        Execute the configured experiment.

        Returns:
            Result rows of every grid point
        """
        kind = self.config.kind
        points = self.grid()
        logger.info(
            f"Running {kind.value} over {len(points)} grid point(s) "
            f"with {self.config.runtime.workers} worker(s), master seed {self.config.seed}"
        )

        handlers = {
            ExperimentKind.SPREAD: self._run_spread,
            ExperimentKind.SWEEP: self._run_spread,
            ExperimentKind.CONDUCTANCE: self._run_conductance,
            ExperimentKind.DENSITY: self._run_density,
            ExperimentKind.INCREMENT: self._run_increment,
            ExperimentKind.CONNECTIVITY: self._run_connectivity,
        }
        rows = handlers[kind](points)

        runtime = self.config.runtime
        if runtime.dump_trajectories and self.trajectories:
            write_trajectories(self.trajectories, runtime.dump_trajectories)
        if runtime.dump_estimates and self.estimates:
            write_estimates(self.estimates, runtime.dump_estimates)
        return rows

    # Task execution

    def _execute(
        self,
        tasks: Sequence[Tuple[Hashable, str, Callable[..., Any], tuple]],
    ) -> Dict[Hashable, Any]:
        """
        Run tasks on the worker pool.

        Args:
            tasks: (key, label, function, args) tuples

        Returns:
            Mapping key -> result, or key -> TaskFailure for tasks that raised
        """
        progress_cfg = self.config.progress
        tracker = ProgressTracker(
            total_items=len(tasks),
            show_bar=progress_cfg.show_bar,
            show_statistics=progress_cfg.show_statistics,
            update_interval=progress_cfg.update_interval,
        )
        results: Dict[Hashable, Any] = {}

        with ThreadPoolExecutor(max_workers=self.config.runtime.workers) as executor:
            futures = {}
            for key, label, function, args in tasks:
                future = executor.submit(function, *args)
                futures[future] = (key, label)

            for future in as_completed(futures):
                key, label = futures[future]
                try:
                    results[key] = future.result()
                    tracker.update(label, success=True)
                except Exception as e:
                    logger.error(f"Task {label} failed: {e}")
                    logger.debug("Task failure details", exc_info=True)
                    results[key] = TaskFailure(error=str(e))
                    tracker.update(label, success=False)

        tracker.finish()
        return results

    # Row helpers

    def _row(
        self,
        point: GridPoint,
        metric: str,
        value: float,
        std_error: Optional[float] = None,
        rounds: int = 1,
    ) -> Optional[ResultRow]:
        if value is None or not math.isfinite(value):
            logger.debug(f"Skipping non-finite {metric} at {point.label}")
            return None
        if std_error is not None and not math.isfinite(std_error):
            std_error = None
        return ResultRow(
            experiment=self.experiment,
            model=point.spec.label,
            n=point.world.n,
            r=point.world.r,
            param=None if point.spec.param is None else float(point.spec.param),
            metric=metric,
            value=float(value),
            std_error=std_error,
            rounds=int(rounds),
            seed=self.config.seed,
        )

    @staticmethod
    def _collect(*rows: Optional[ResultRow]) -> List[ResultRow]:
        return [row for row in rows if row is not None]

    def _failure_row(self, point: GridPoint, failures: int) -> List[ResultRow]:
        if failures == 0:
            return []
        return self._collect(self._row(point, "failed_runs", failures, rounds=failures))

    # Spreading time

    def _sources(self, point: GridPoint) -> np.ndarray:
        n = point.world.n
        count = min(self.config.experiment.sources, n)
        return self.master.child(point.index).generator().choice(n, size=count, replace=False)

    def _max_slots(self, point: GridPoint) -> int:
        configured = self.config.experiment.max_slots
        if configured is not None:
            return configured
        eps = self.config.experiment.epsilon
        return min(default_max_slots(point.world, point.spec, eps), HARNESS_SLOTS_PER_NODE * point.world.n)

    def _run_spread(self, points: List[GridPoint]) -> List[ResultRow]:
        rounds = self.config.experiment.rounds
        tasks = []
        for point in points:
            sources = self._sources(point)
            max_slots = self._max_slots(point)
            for replicate in range(rounds):
                source = int(sources[replicate % len(sources)])
                stream = self.master.child(point.index, replicate)
                tasks.append((
                    (point.index, replicate),
                    f"{point.label} run {replicate}",
                    run_spread,
                    (point.world, point.spec, source, self.mode, max_slots, stream),
                ))
        results = self._execute(tasks)

        rows = []
        for point in points:
            outcomes = [results[(point.index, replicate)] for replicate in range(rounds)]
            runs = [o for o in outcomes if isinstance(o, SpreadTrajectory)]
            self.trajectories.extend(runs)
            rows.extend(self._spread_rows(point, runs))
            rows.extend(self._failure_row(point, len(outcomes) - len(runs)))
        return rows

    def _spread_rows(self, point: GridPoint, runs: List[SpreadTrajectory]) -> List[ResultRow]:
        if not runs:
            return []
        n = point.world.n
        eps = self.config.experiment.epsilon
        count = len(runs)
        completions = [run.completion_slot for run in runs if run.completed]

        fraction, fraction_se = mean_and_stderr([1.0 if run.completed else 0.0 for run in runs])
        mean_slot, mean_slot_se = mean_and_stderr(completions)
        t_eps = spreading_time(runs, eps)
        phi = table1_phi(point.spec, n, point.world.r).phi

        rows = self._collect(
            self._row(point, "completion_fraction", fraction, fraction_se, count),
            self._row(point, "mean_completion_slot", mean_slot, mean_slot_se, len(completions)),
            self._row(point, "optimal_floor", optimal_time_floor(n), rounds=count),
            self._row(point, "theory_phi", phi, rounds=count),
            self._row(point, "theory_bound", spreading_time_bound(n, eps, phi), rounds=count),
        )
        if completions:
            rows.extend(self._collect(self._row(point, "min_completion_slot", min(completions), rounds=count)))
        if t_eps is None:
            horizon = max(run.slots for run in runs)
            logger.warning(f"{point.label}: spreading time not reached within {horizon} slots")
            rows.extend(self._collect(self._row(point, "spreading_time_censored", horizon, rounds=count)))
        else:
            rows.extend(self._collect(self._row(point, "spreading_time", t_eps, rounds=count)))
            if self.config.kind is ExperimentKind.SWEEP:
                rows.extend(self._collect(
                    self._row(point, "spreading_time_over_log_n", t_eps / math.log(n), rounds=count)
                ))
        return rows

    # Conductance

    def _layout_for(self, point: GridPoint):
        if self.config.experiment.sampling != "conditioned":
            return None
        mobility = create_mobility(point.spec, point.world)
        snap, _ = mobility.init_stationary(self.master.child(point.index, TAG_INIT))
        return snap

    def _conductance_point(self, point: GridPoint) -> Dict[str, Any]:
        exp = self.config.experiment
        family = CutFamily(exp.cuts, random_count=exp.random_cuts)
        stream = self.master.child(point.index)
        layout = self._layout_for(point)
        world, spec, samples = point.world, point.spec, exp.samples

        rules = family.rules(world.n, stream)
        estimates = evaluate_family(world, spec, rules, samples, stream, layout)
        finite = [e.mean if e.samples else math.inf for e in estimates]
        best = int(np.argmin(finite))
        result = {"estimates": estimates, "best": estimates[best]}
        result["edge_best"] = edge_count_quotient(world, spec, rules[best], samples, stream, layout)

        bisect = next((i for i, rule in enumerate(rules) if rule.cut_id == "bisect-x"), None)
        if bisect is not None:
            result["bisect"] = estimates[bisect]
            result["edge_bisect"] = edge_count_quotient(world, spec, rules[bisect], samples, stream, layout)
            result["crossing_bisect"] = expected_crossing_edges(world, spec, rules[bisect], samples, stream, layout)
        return result

    def _run_conductance(self, points: List[GridPoint]) -> List[ResultRow]:
        tasks = [(point.index, point.label, self._conductance_point, (point,)) for point in points]
        results = self._execute(tasks)

        static_anchor = {}
        for point in points:
            outcome = results[point.index]
            if point.spec.kind is MobilityKind.STATIC and not isinstance(outcome, TaskFailure):
                static_anchor.setdefault(point.world.n, outcome["best"].mean)

        rows = []
        for point in points:
            outcome = results[point.index]
            if isinstance(outcome, TaskFailure):
                rows.extend(self._failure_row(point, 1))
                continue
            self.estimates.extend(outcome["estimates"])
            rows.extend(self._conductance_rows(point, outcome, static_anchor.get(point.world.n)))
        return rows

    def _estimate_rows(self, point: GridPoint, name: str, estimate: ConductanceEstimate) -> List[ResultRow]:
        rows = [self._row(point, f"quotient_{name}", estimate.mean, estimate.std_error, estimate.samples)]
        if estimate.interfaces and estimate.interfaces > 1:
            se = estimate.std_error / estimate.interfaces if estimate.std_error is not None else None
            rows.append(self._row(
                point, f"quotient_{name}_per_interface", estimate.per_interface, se, estimate.samples
            ))
        return self._collect(*rows)

    def _conductance_rows(self, point: GridPoint, outcome: Dict[str, Any], anchor: Optional[float]) -> List[ResultRow]:
        world, spec = point.world, point.spec
        samples = self.config.experiment.samples
        best = outcome["best"]
        edge = outcome["edge_best"]

        rows = self._estimate_rows(point, "min", best)
        rows.extend(self._collect(
            self._row(point, "edge_count_quotient_min", edge.mean, edge.std_error, edge.samples),
            self._row(point, "theory_phi", table1_phi(spec, world.n, world.r).phi, rounds=samples),
        ))

        if "bisect" in outcome:
            crossing = outcome["crossing_bisect"]
            interfaces = crossing.interfaces or 1
            rows.extend(self._estimate_rows(point, "bisect", outcome["bisect"]))
            rows.extend(self._collect(
                self._row(point, "edge_count_quotient_bisect", outcome["edge_bisect"].mean,
                          outcome["edge_bisect"].std_error, outcome["edge_bisect"].samples),
                self._row(point, "crossing_edges_bisect", crossing.mean, crossing.std_error, crossing.samples),
            ))
            if interfaces > 1:
                rows.extend(self._collect(
                    self._row(point, "crossing_edges_bisect_per_interface", crossing.mean / interfaces,
                              None if crossing.std_error is None else crossing.std_error / interfaces,
                              crossing.samples),
                ))
            if spec.kind is MobilityKind.VELOCITY_CONSTRAINED:
                rows.extend(self._collect(
                    self._row(point, "contact_pairs_theory",
                              contact_pairs_integral(spec.v_max, world.r, world.n), rounds=samples),
                ))

        if spec.kind is MobilityKind.VELOCITY_CONSTRAINED:
            rows.extend(self._collect(
                self._row(point, "velocity_phi", velocity_phi(spec.v_max, world.r), rounds=samples)
            ))
        if anchor is not None and spec.kind in (
            MobilityKind.STATIC, MobilityKind.PARTIALLY_RANDOM, MobilityKind.AREA_CONSTRAINED_1D
        ):
            anchored = anchored_table1_phi(spec, world.n, world.r, anchor)
            rows.extend(self._collect(self._row(point, "anchored_phi", anchored.phi, rounds=samples)))
        return rows

    # Density profile

    def _run_density(self, points: List[GridPoint]) -> List[ResultRow]:
        exp = self.config.experiment
        tasks = [
            (point.index, point.label, mixing_profile,
             (point.world, point.spec, exp.bins, exp.node_samples, self.master.child(point.index)))
            for point in points
        ]
        results = self._execute(tasks)

        rows = []
        for point in points:
            profile = results[point.index]
            if isinstance(profile, TaskFailure):
                rows.extend(self._failure_row(point, 1))
                continue
            v_max = point.spec.v_max
            predicted = None
            if point.spec.kind is MobilityKind.VELOCITY_CONSTRAINED and v_max:
                predicted = density_profile(profile.bin_centres, v_max)

            for c, offset in enumerate(profile.bin_centres):
                count = int(profile.counts[c])
                if count == 0:
                    continue
                tag = f"{offset:+.5f}"
                fraction = profile.fractions[c]
                se = math.sqrt(fraction * (1.0 - fraction) / count) if count > 1 else None
                rows.extend(self._collect(self._row(point, f"mixing_fraction@{tag}", fraction, se, count)))
                if predicted is not None:
                    rows.extend(self._collect(self._row(point, f"predicted_fraction@{tag}", predicted[c], rounds=count)))

            if predicted is not None:
                observed = profile.counts > 0
                if observed.any():
                    sup = float(np.max(np.abs(profile.fractions[observed] - predicted[observed])))
                    rows.extend(self._collect(
                        self._row(point, "profile_sup_distance", sup, rounds=profile.node_samples)
                    ))
        return rows

    # Increment inequality

    def _increment_task(self, point: GridPoint, size: int, stream: SeedStream) -> Tuple[float, float, float]:
        n = point.world.n
        ids = stream.child(TAG_INIT).generator().choice(n, size=size, replace=False)
        informed = InformedSet.from_ids(n, ids)
        samples = self.config.experiment.samples
        increment = increment_estimate(point.world, point.spec, informed, self.mode, samples, stream)
        quotient = estimate_cut_quotient(point.world, point.spec, CutSet(informed.members), samples, stream)
        bound = size / 2.0 * quotient.mean
        return increment.mean, quotient.mean, bound

    def _run_increment(self, points: List[GridPoint]) -> List[ResultRow]:
        exp = self.config.experiment
        tasks = []
        for point in points:
            for f_index, fraction in enumerate(exp.informed_fractions):
                size = max(1, int(round(fraction * point.world.n)))
                for j in range(exp.informed_sets):
                    stream = self.master.child(point.index, f_index, j)
                    tasks.append((
                        (point.index, f_index, j),
                        f"{point.label} |S|={size} set {j}",
                        self._increment_task,
                        (point, size, stream),
                    ))
        results = self._execute(tasks)

        rows = []
        for point in points:
            failures = 0
            for f_index, fraction in enumerate(exp.informed_fractions):
                outcomes = [results[(point.index, f_index, j)] for j in range(exp.informed_sets)]
                done = [o for o in outcomes if not isinstance(o, TaskFailure)]
                failures += len(outcomes) - len(done)
                if not done:
                    continue
                tag = f"{fraction:g}"
                increments = [o[0] for o in done]
                bounds = [o[2] for o in done]
                ratios = [inc / b for inc, _, b in done if b > 0]
                inc_mean, inc_se = mean_and_stderr(increments)
                bound_mean, bound_se = mean_and_stderr(bounds)
                rows.extend(self._collect(
                    self._row(point, f"increment@{tag}", inc_mean, inc_se, len(done)),
                    self._row(point, f"increment_lower_bound@{tag}", bound_mean, bound_se, len(done)),
                    self._row(point, f"increment_bound_ratio_min@{tag}", min(ratios) if ratios else math.nan,
                              rounds=len(ratios)),
                ))
            rows.extend(self._failure_row(point, failures))
        return rows

    # Connectivity

    def _connectivity_task(self, point: GridPoint, trial: int) -> bool:
        mobility = create_mobility(point.spec, point.world)
        snap, _ = mobility.init_stationary(self.master.child(point.index, trial))
        return build_index(snap, point.world.r, point.world.boundary).is_connected()

    def _run_connectivity(self, points: List[GridPoint]) -> List[ResultRow]:
        trials = self.config.experiment.trials
        tasks = [
            ((point.index, t), f"{point.label} trial {t}", self._connectivity_task, (point, t))
            for point in points
            for t in range(trials)
        ]
        results = self._execute(tasks)

        rows = []
        for point in points:
            outcomes = [results[(point.index, t)] for t in range(trials)]
            done = [1.0 if o else 0.0 for o in outcomes if not isinstance(o, TaskFailure)]
            fraction, se = mean_and_stderr(done)
            ratio = mobility_connectivity_ratio(point.world.n, point.world.r, point.spec.v_max or 0.0)
            rows.extend(self._collect(
                self._row(point, "connected_fraction", fraction, se, len(done)),
                self._row(point, "connectivity_ratio", ratio, rounds=len(done)),
            ))
            rows.extend(self._failure_row(point, len(outcomes) - len(done)))
        return rows


def run_experiment(config: ExperimentConfig) -> List[ResultRow]:
    """
    Run the experiment described by ``config``.

    Args:
        config: Validated experiment configuration

    Returns:
        Result rows, one per (grid point, metric)
    """
    return ExperimentRunner(config).run()
