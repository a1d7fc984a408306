"""
Conductance

Monte-Carlo estimation of mobile conductance: the expected post-move cut
quotient sum_{i in S', j not in S'} P_ij(t+1) / |S'| for a node set S'
fixed before the move, minimized over a family of cuts.

Two sampling modes are supported:

    - stationary: every sample draws a fresh stationary layout; geometric
      cut rules (axis lines) are materialized on that layout
    - conditioned: a fixed pre-move layout is given; every cut is then a
      fixed set of node ids and the expectation is over the move only

All cuts of one evaluation share the same samples, and a whole family is
evaluated with one batched matrix product per sample.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.errors import InvalidParameterError
from ..core.geometry import (
    Boundary,
    CutSet,
    Snapshot,
    WorldConfig,
    build_index,
    crossing_edge_counts,
    cut_quotients,
)
from ..core.mobility_config import MobilitySpec
from ..mobility.registry import create_mobility
from ..utils.file_operations import write_table
from ..utils.seeding import TAG_CUTS, TAG_SAMPLE, as_stream
from ..utils.statistics import mean_and_stderr

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 14
DEFAULT_SWEEP_OFFSETS = 32
DEFAULT_RANDOM_CUTS = 16
ESTIMATE_COLUMNS = [
    "model", "n", "r", "param", "cut_id", "quotient_kind", "mean", "std_error", "samples",
]


class QuotientKind(Enum):
    """Which form of the cut quotient is estimated."""
    EXACT_PIJ = "exact"
    EDGE_COUNT = "edge-count"


class FamilyKind(Enum):
    """Cut generators available to a CutFamily."""
    SWEEP = "sweep"
    BISECT = "bisect"
    RANDOM = "random"
    EXHAUSTIVE = "exhaustive"


class CutRule(ABC):
    """A recipe that turns a pre-move layout into a node set S'."""

    cut_id: str

    @abstractmethod
    def materialize(self, positions: np.ndarray) -> np.ndarray:
        """Boolean membership vector of S' on the given (n, 2) layout."""
        pass

    def interfaces(self, boundary: Boundary) -> Optional[int]:
        """Number of boundary lines the cut has in space, when meaningful."""
        return None


@dataclass(frozen=True, eq=False)
class FixedCut(CutRule):
    """A cut given directly as a set of node ids."""
    cut_id: str
    members: np.ndarray

    def __post_init__(self):
        members = np.asarray(self.members, dtype=bool).copy()
        members.setflags(write=False)
        object.__setattr__(self, 'members', members)

    def materialize(self, positions: np.ndarray) -> np.ndarray:
        if positions.shape[0] != self.members.shape[0]:
            raise InvalidParameterError(
                f"cut {self.cut_id} is over {self.members.shape[0]} nodes, layout has {positions.shape[0]}"
            )
        return self.members


@dataclass(frozen=True)
class AxisCut(CutRule):
    """
    Nodes on the smaller side of the line {coordinate[axis] = offset}.

    axis 0 is a vertical line (split by x), axis 1 a horizontal one.
    """
    cut_id: str
    axis: int
    offset: float

    def materialize(self, positions: np.ndarray) -> np.ndarray:
        side = positions[:, self.axis] < self.offset
        if side.sum() > positions.shape[0] // 2:
            side = ~side
        return side

    def interfaces(self, boundary: Boundary) -> Optional[int]:
        return 2 if boundary is Boundary.TORUS else 1


def as_cut_rule(cut: Union[CutRule, CutSet], cut_id: str = "custom") -> CutRule:
    """Wrap a CutSet as a FixedCut; rules pass through."""
    if isinstance(cut, CutRule):
        return cut
    if isinstance(cut, CutSet):
        return FixedCut(cut_id, cut.members)
    raise InvalidParameterError(f"not a cut: {cut!r}")


def bisection(axis: int = 0) -> AxisCut:
    """The half-square bisection along an axis."""
    return AxisCut("bisect-x" if axis == 0 else "bisect-y", axis, 0.5)


class CutFamily:
    """
    Deterministically ordered set of cut rules to minimize over.

    Generation order: bisections (x, then y), vertical then horizontal
    sweeps, random balanced cuts, then every subset of size 1..floor(n/2)
    in increasing bit-mask order.
    """

    def __init__(
        self,
        kinds: Iterable[Union[FamilyKind, str]],
        offsets: int = DEFAULT_SWEEP_OFFSETS,
        random_count: int = DEFAULT_RANDOM_CUTS,
    ):
        """
        Initialize the family.

        Args:
            kinds: Generators to include
            offsets: Sweep lines per axis, evenly spaced in (0, 1)
            random_count: Number of random balanced cuts
        """
        self.kinds = {FamilyKind(kind) for kind in kinds}
        if not self.kinds:
            raise InvalidParameterError("cut family must include at least one generator")
        if offsets < 1 or random_count < 0:
            raise InvalidParameterError(f"invalid family sizes: offsets={offsets}, random={random_count}")
        self.offsets = offsets
        self.random_count = random_count

    def rules(self, n: int, rng=0) -> List[CutRule]:
        """
        Generate the family's rules for n nodes.

        Args:
            n: Node count
            rng: Stream for random balanced cuts

        Raises:
            InvalidParameterError: if the exhaustive generator is asked for n > 14
        """
        rules: List[CutRule] = []
        if FamilyKind.BISECT in self.kinds:
            rules.extend([bisection(0), bisection(1)])
        if FamilyKind.SWEEP in self.kinds:
            lines = [j / (self.offsets + 1) for j in range(1, self.offsets + 1)]
            for axis, name in ((0, "x"), (1, "y")):
                rules.extend(AxisCut(f"sweep-{name}-{j:02d}", axis, offset) for j, offset in enumerate(lines))
        if FamilyKind.RANDOM in self.kinds and n >= 2:
            generator = as_stream(rng).child(TAG_CUTS).generator()
            for j in range(self.random_count):
                members = np.zeros(n, dtype=bool)
                members[generator.permutation(n)[:n // 2]] = True
                rules.append(FixedCut(f"random-{j:03d}", members))
        if FamilyKind.EXHAUSTIVE in self.kinds:
            rules.extend(exhaustive_cuts(n))
        return rules


def exhaustive_cuts(n: int) -> List[FixedCut]:
    """Every node set of size 1..floor(n/2), for n <= 14."""
    if n > EXHAUSTIVE_MAX_N:
        raise InvalidParameterError(
            f"exhaustive search refused for n={n}: limit is {EXHAUSTIVE_MAX_N} (2^n cuts)"
        )
    masks = np.arange(1, 2 ** n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(bool)
    keep = bits.sum(axis=1) <= n // 2
    return [FixedCut(f"subset-{int(mask):x}", row) for mask, row in zip(masks[keep], bits[keep])]


@dataclass(frozen=True)
class ConductanceEstimate:
    """
    Monte-Carlo estimate of one cut quotient.

    Attributes:
        mean: Sample mean of the quotient
        std_error: Standard error of the mean (None for one sample)
        samples: Number of samples the mean is based on
        cut_id: Identifier of the cut rule
        quotient_kind: Exact contact probabilities or edge-count form
        model, n, r, param: Point the estimate was taken at
        interfaces: Spatial boundary lines of the cut, when it has any
        cut: The node set on the reference layout, when known
    """
    mean: float
    std_error: Optional[float]
    samples: int
    cut_id: str
    quotient_kind: QuotientKind
    model: str
    n: int
    r: float
    param: Optional[float] = None
    interfaces: Optional[int] = None
    cut: Optional[CutSet] = field(default=None, compare=False)

    @property
    def per_interface(self) -> float:
        """Mean divided by the number of interfaces (the mean itself when unknown)."""
        return self.mean / self.interfaces if self.interfaces else self.mean


@dataclass(frozen=True)
class CrossingEstimate:
    """Monte-Carlo estimate of E[N_S'(t+1)], the post-move crossing-edge count."""
    mean: float
    std_error: Optional[float]
    samples: int
    cut_id: str
    interfaces: Optional[int] = None


@dataclass(frozen=True)
class MixingProfile:
    """
    Post-move composition around a bisection line.

    Attributes:
        bin_centres: signed offsets from the line
        fractions: share of nodes in each bin that started on the left side
        counts: nodes observed per bin
        node_samples: total nodes drawn
    """
    bin_centres: np.ndarray
    fractions: np.ndarray
    counts: np.ndarray
    node_samples: int


def _sample_cuts(
    world: WorldConfig,
    spec: MobilitySpec,
    rules: Sequence[CutRule],
    samples: int,
    rng,
    layout: Optional[Snapshot],
    statistic: str,
) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]:
    """
    Evaluate every rule on shared samples.

    Returns:
        (values of shape (samples, C), set sizes of shape (samples, C),
        member matrix on the reference layout)
    """
    if samples < 1:
        raise InvalidParameterError(f"samples must be at least 1: {samples}")
    if not rules:
        raise InvalidParameterError("no cuts to evaluate")

    stream = as_stream(rng)
    mobility = create_mobility(spec, world)
    values = np.full((samples, len(rules)), np.nan)
    sizes = np.zeros((samples, len(rules)))
    reference = None
    fixed = None

    for s in range(samples):
        sample_stream = stream.child(TAG_SAMPLE, s)
        snap, state = mobility.init_stationary(sample_stream, layout=layout)
        if fixed is None or layout is None:
            members = np.stack([rule.materialize(snap.positions) for rule in rules])
            if layout is not None:
                fixed = members
        else:
            members = fixed
        if reference is None:
            reference = members

        after = mobility.step(state, snap, sample_stream)
        index = build_index(after, world.r, world.boundary)
        if statistic == "quotient":
            row = cut_quotients(index, members)
        else:
            row = crossing_edge_counts(index, members)
        count = members.sum(axis=1)
        proper = (count > 0) & (count < world.n)
        values[s] = np.where(proper, row, np.nan)
        sizes[s] = count

    return values, sizes, reference


def _summarize(values: np.ndarray) -> Tuple[float, Optional[float], int]:
    valid = values[~np.isnan(values)]
    mean, std_error = mean_and_stderr(valid)
    return mean, std_error, int(valid.size)


def _estimates(
    world: WorldConfig,
    spec: MobilitySpec,
    rules: Sequence[CutRule],
    values: np.ndarray,
    reference: Optional[np.ndarray],
    kind: QuotientKind,
) -> List[ConductanceEstimate]:
    estimates = []
    for c, rule in enumerate(rules):
        mean, std_error, count = _summarize(values[:, c])
        cut = CutSet(reference[c]) if reference is not None else None
        estimates.append(ConductanceEstimate(
            mean=mean,
            std_error=std_error,
            samples=count,
            cut_id=rule.cut_id,
            quotient_kind=kind,
            model=spec.label,
            n=world.n,
            r=world.r,
            param=spec.param,
            interfaces=rule.interfaces(world.boundary),
            cut=cut,
        ))
    return estimates


def _check_cut(world: WorldConfig, cut: Union[CutRule, CutSet]):
    if isinstance(cut, CutSet):
        if cut.n != world.n:
            raise InvalidParameterError(f"cut is over {cut.n} nodes, world has {world.n}")
        if cut.size == 0 or cut.size == cut.n:
            raise InvalidParameterError("cut and its complement must both be non-empty")


def cut_quotient_sample(
    world: WorldConfig,
    spec: MobilitySpec,
    cut: Union[CutRule, CutSet],
    rng,
    layout: Optional[Snapshot] = None,
) -> float:
    """
    One sample of the exact cut quotient.

    Draws a stationary layout (or uses ``layout``), fixes S' on it, moves
    once and returns sum_{i in S', j not in S'} 1/|N_i(t+1)| / |S'|.
    Isolated nodes contribute zero.
    """
    _check_cut(world, cut)
    values, _, _ = _sample_cuts(world, spec, [as_cut_rule(cut)], 1, rng, layout, "quotient")
    return float(values[0, 0])


def estimate_cut_quotient(
    world: WorldConfig,
    spec: MobilitySpec,
    cut: Union[CutRule, CutSet],
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> ConductanceEstimate:
    """
    Mean and standard error of the exact cut quotient over independent samples.

    Samples in which a geometric rule yields an empty or full set are
    skipped; ``samples`` in the result counts the ones used.
    """
    _check_cut(world, cut)
    rule = as_cut_rule(cut)
    values, _, reference = _sample_cuts(world, spec, [rule], samples, rng, layout, "quotient")
    return _estimates(world, spec, [rule], values, reference, QuotientKind.EXACT_PIJ)[0]


def evaluate_family(
    world: WorldConfig,
    spec: MobilitySpec,
    family: Union[CutFamily, Sequence[CutRule]],
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> List[ConductanceEstimate]:
    """Exact-quotient estimates for every member of a family, in generation order."""
    stream = as_stream(rng)
    rules = family.rules(world.n, stream) if isinstance(family, CutFamily) else list(family)
    if not rules:
        raise InvalidParameterError("cut family generated no cuts")
    values, _, reference = _sample_cuts(world, spec, rules, samples, stream, layout, "quotient")
    return _estimates(world, spec, rules, values, reference, QuotientKind.EXACT_PIJ)


def _argmin(estimates: Sequence[ConductanceEstimate]) -> int:
    means = np.array([e.mean if e.samples > 0 else np.inf for e in estimates])
    if not np.isfinite(means).any():
        raise InvalidParameterError("cut family generated no valid cut")
    return int(np.argmin(means))


def minimize_over_family(
    world: WorldConfig,
    spec: MobilitySpec,
    family: Union[CutFamily, Sequence[CutRule]],
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> Tuple[CutSet, ConductanceEstimate]:
    """
    Family member with the smallest estimated quotient.

    Ties go to the first cut in generation order. The returned CutSet is
    the minimizing rule materialized on the conditioning layout, or on the
    first sample's layout in stationary mode.

    Raises:
        InvalidParameterError: if the family yields no valid cut
    """
    estimates = evaluate_family(world, spec, family, samples, rng, layout)
    best = estimates[_argmin(estimates)]
    logger.debug(f"Family minimum for {spec.describe()} at n={world.n}: {best.cut_id} = {best.mean:.6g}")
    return best.cut, best


def brute_force_min(
    world: WorldConfig,
    spec: MobilitySpec,
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> Tuple[CutSet, ConductanceEstimate]:
    """
    Exact minimization over all cuts of size 1..floor(n/2) on shared samples.

    Raises:
        InvalidParameterError: for n > 14
    """
    if world.n > EXHAUSTIVE_MAX_N:
        raise InvalidParameterError(
            f"exhaustive search refused for n={world.n}: limit is {EXHAUSTIVE_MAX_N} (2^n cuts)"
        )
    return minimize_over_family(world, spec, CutFamily([FamilyKind.EXHAUSTIVE]), samples, rng, layout)


def contact_probability(world: WorldConfig) -> float:
    """Common contact probability P(n, r) = 1 / (n pi r^2)."""
    return 1.0 / (world.n * math.pi * world.r ** 2)


def edge_count_quotient(
    world: WorldConfig,
    spec: MobilitySpec,
    cut: Union[CutRule, CutSet],
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> ConductanceEstimate:
    """
    Edge-count form of the quotient: P(n, r) * N_S'(t+1) / |S'|.

    Uses the same samples as estimate_cut_quotient for the same rng.
    """
    _check_cut(world, cut)
    rule = as_cut_rule(cut)
    counts, sizes, reference = _sample_cuts(world, spec, [rule], samples, rng, layout, "edges")
    with np.errstate(invalid='ignore', divide='ignore'):
        values = contact_probability(world) * counts / sizes
    return _estimates(world, spec, [rule], values, reference, QuotientKind.EDGE_COUNT)[0]


def expected_crossing_edges(
    world: WorldConfig,
    spec: MobilitySpec,
    cut: Union[CutRule, CutSet],
    samples: int,
    rng,
    layout: Optional[Snapshot] = None,
) -> CrossingEstimate:
    """Monte-Carlo E[N_S'(t+1)] for a cut fixed before the move."""
    _check_cut(world, cut)
    rule = as_cut_rule(cut)
    counts, _, _ = _sample_cuts(world, spec, [rule], samples, rng, layout, "edges")
    mean, std_error, count = _summarize(counts[:, 0])
    return CrossingEstimate(
        mean=mean,
        std_error=std_error,
        samples=count,
        cut_id=rule.cut_id,
        interfaces=rule.interfaces(world.boundary),
    )


def mixing_profile(
    world: WorldConfig,
    spec: MobilitySpec,
    bins: int,
    node_samples: int,
    rng,
    half_width: Optional[float] = None,
) -> MixingProfile:
    """
    Empirical post-move fraction of left-side nodes around the vertical bisection.

    Layouts are drawn until ``node_samples`` nodes have been observed; every
    node whose post-move x lies within ``half_width`` of 0.5 is binned by its
    signed offset.

    Args:
        half_width: Window half-width; defaults to v_max for the velocity
            model and to r otherwise
    """
    if bins < 1 or node_samples < 1:
        raise InvalidParameterError(f"bins and node_samples must be positive: {bins}, {node_samples}")
    if half_width is None:
        half_width = spec.v_max if spec.v_max else world.r
    if not half_width > 0:
        raise InvalidParameterError(f"half_width must be positive: {half_width}")

    stream = as_stream(rng)
    mobility = create_mobility(spec, world)
    edges = np.linspace(-half_width, half_width, bins + 1)
    left_counts = np.zeros(bins)
    counts = np.zeros(bins)
    draws = math.ceil(node_samples / world.n)

    for d in range(draws):
        sample_stream = stream.child(TAG_SAMPLE, d)
        snap, state = mobility.init_stationary(sample_stream)
        after = mobility.step(state, snap, sample_stream)
        started_left = snap.positions[:, 0] < 0.5
        offsets = after.positions[:, 0] - 0.5
        window = np.abs(offsets) <= half_width
        which = np.clip(np.searchsorted(edges, offsets[window], side='right') - 1, 0, bins - 1)
        counts += np.bincount(which, minlength=bins)
        left_counts += np.bincount(which, weights=started_left[window].astype(float), minlength=bins)

    with np.errstate(invalid='ignore', divide='ignore'):
        fractions = left_counts / counts
    return MixingProfile(
        bin_centres=(edges[:-1] + edges[1:]) / 2.0,
        fractions=fractions,
        counts=counts.astype(np.int64),
        node_samples=draws * world.n,
    )


def estimates_frame(estimates: Sequence[ConductanceEstimate]) -> pd.DataFrame:
    records = [
        (e.model, e.n, e.r, e.param, e.cut_id, e.quotient_kind.value, e.mean, e.std_error, e.samples)
        for e in estimates
    ]
    return pd.DataFrame.from_records(records, columns=ESTIMATE_COLUMNS)


def write_estimates(estimates: Sequence[ConductanceEstimate], path: Optional[Union[str, Path]]):
    """Dump estimates as CSV `model,n,r,param,cut_id,quotient_kind,mean,std_error,samples`."""
    write_table(estimates_frame(estimates), path)
