"""
Theory

Closed-form reference values for mobile conductance and spreading time:
the per-model conductance table, the post-move density profile of a
bisection under the velocity model, the expected post-move contact-pair
count, its piecewise approximation, and the spreading-time bounds.

Every function here is pure.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy import integrate

from ..core.errors import InvalidParameterError, NumericalFailureError
from ..core.mobility_config import MobilityKind, MobilitySpec

logger = logging.getLogger(__name__)

QUAD_EPSREL = 1e-6
QUAD_LIMIT = 200


class PredictionKind(Enum):
    """How a predicted conductance value should be read."""
    ORDER_ONLY = "order"
    CLOSED_FORM = "closed-form"
    APPROXIMATION = "approximation"


@dataclass(frozen=True)
class Prediction:
    """
    Predicted mobile conductance for one model at one (n, r).

    ORDER_ONLY values carry an unspecified constant (fixed to 1 here), so
    only their shape across n or parameters is meaningful.
    """
    model: str
    n: int
    r: float
    param: Optional[float]
    phi: float
    kind: PredictionKind

    def __post_init__(self):
        if not self.phi >= 0:
            raise InvalidParameterError(f"predicted conductance must be non-negative: {self.phi}")

    @property
    def unspecified_constant(self) -> bool:
        return self.kind is PredictionKind.ORDER_ONLY


def _check_n(n: int):
    if n < 2:
        raise InvalidParameterError(f"n must be at least 2: {n}")


def static_phi(n: float) -> float:
    """Static conductance sqrt(log n / n), constant fixed to 1."""
    _check_n(n)
    return math.sqrt(math.log(n) / n)


def _mixture_phi(spec: MobilitySpec, n: int, phi_s: float) -> float:
    if spec.kind is MobilityKind.PARTIALLY_RANDOM:
        k = spec.k
        return ((n - k) / n) ** 2 * phi_s + k * (2 * n - k) / (2 * n ** 2)
    n_v, n_h = spec.n_v, spec.n_h
    return (n_v ** 2 + n_h ** 2) / n ** 2 * phi_s + n_v * n_h / n ** 2


def table1_phi(spec: MobilitySpec, n: int, r: float) -> Prediction:
    """
    Per-model conductance prediction.

    Partially random and one-dimensional area constrained models have
    closed forms in the static value; the others are order results.

    Args:
        spec: Mobility model
        n: Node count
        r: Transmission radius

    Returns:
        Prediction for the model
    """
    _check_n(n)
    spec.validate(n)
    phi_s = static_phi(n)
    kind = spec.kind

    if kind is MobilityKind.STATIC:
        phi, pkind = phi_s, PredictionKind.ORDER_ONLY
    elif kind is MobilityKind.FULLY_RANDOM:
        phi, pkind = 1.0, PredictionKind.ORDER_ONLY
    elif kind in (MobilityKind.PARTIALLY_RANDOM, MobilityKind.AREA_CONSTRAINED_1D):
        phi, pkind = _mixture_phi(spec, n, phi_s), PredictionKind.CLOSED_FORM
    elif kind is MobilityKind.VELOCITY_CONSTRAINED:
        phi, pkind = max(spec.v_max, r), PredictionKind.ORDER_ONLY
    else:
        phi, pkind = max(spec.r_c, r), PredictionKind.ORDER_ONLY

    return Prediction(model=spec.label, n=n, r=r, param=spec.param, phi=phi, kind=pkind)


def anchored_table1_phi(spec: MobilitySpec, n: int, r: float, static_anchor: float) -> Prediction:
    """
    Closed-form prediction with the static value replaced by a measurement.

    Only the static, partially random and one-dimensional area constrained
    rows are expressed in the static value.

    Args:
        spec: Mobility model
        n: Node count
        r: Transmission radius
        static_anchor: Measured static conductance at the same (n, r)
    """
    _check_n(n)
    spec.validate(n)
    if static_anchor < 0:
        raise InvalidParameterError(f"static anchor must be non-negative: {static_anchor}")
    if spec.kind is MobilityKind.STATIC:
        phi = static_anchor
    elif spec.kind in (MobilityKind.PARTIALLY_RANDOM, MobilityKind.AREA_CONSTRAINED_1D):
        phi = _mixture_phi(spec, n, static_anchor)
    else:
        raise InvalidParameterError(f"{spec.label} has no closed form in the static conductance")
    return Prediction(
        model=spec.label, n=n, r=r, param=spec.param, phi=phi, kind=PredictionKind.CLOSED_FORM
    )


def density_profile(offset: Union[float, np.ndarray], v_max: float) -> Union[float, np.ndarray]:
    """
    Fraction of nodes at signed distance ``offset`` from a bisection line
    that started on the left side, one velocity-model move after the cut.

    Equals 1 for offset <= -v_max, 0 for offset >= v_max and
    (arccos(u) - u*sqrt(1 - u^2)) / pi with u = offset / v_max in between.
    The right side's profile is one minus this value.

    Raises:
        InvalidParameterError: if v_max <= 0
    """
    if not v_max > 0:
        raise InvalidParameterError(f"density profile needs v_max > 0: {v_max}")
    u = np.clip(np.asarray(offset, dtype=float) / v_max, -1.0, 1.0)
    value = (np.arccos(u) - u * np.sqrt(1.0 - u * u)) / math.pi
    if np.ndim(value) == 0:
        return float(value)
    return value


def _chord(d: float, r: float) -> float:
    return 2.0 * math.sqrt(max(r * r - d * d, 0.0))


def _inner_points(lo: float, hi: float, candidates):
    points = [p for p in candidates if lo < p < hi]
    return points or None


def contact_pairs_integral(v_max: float, r: float, n: int) -> float:
    """
    Expected number of post-move contact pairs across one bisection line.

    Integrates n^2 * rho(x) * (1 - rho(l)) * 2*sqrt(r^2 - (l - x)^2) over
    |l - x| <= r, where rho is density_profile, with nested adaptive
    quadrature. A unit-length interface is assumed; a torus bisection has
    two such interfaces.

    With v_max = 0 the profile is a step and the value is n^2 * 2 r^3 / 3.

    Raises:
        InvalidParameterError: for v_max < 0 or r <= 0
        NumericalFailureError: if quadrature returns a non-finite value
    """
    if v_max < 0:
        raise InvalidParameterError(f"v_max must be non-negative: {v_max}")
    if not r > 0:
        raise InvalidParameterError(f"r must be positive: {r}")

    if v_max == 0:
        return float(n) ** 2 * 2.0 * r ** 3 / 3.0

    v = float(v_max)

    def inner(x: float) -> float:
        lo = max(x - r, -v)
        hi = x + r
        if hi <= lo:
            return 0.0
        value, _ = integrate.quad(
            lambda l: (1.0 - density_profile(l, v)) * _chord(l - x, r),
            lo, hi,
            points=_inner_points(lo, hi, (v,)),
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
        )
        return density_profile(x, v) * value

    lo, hi = -v - r, v
    total, abserr = integrate.quad(
        inner, lo, hi,
        points=_inner_points(lo, hi, (-v, v - r, r - v)),
        epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT,
    )
    result = float(n) ** 2 * total
    if not math.isfinite(result):
        raise NumericalFailureError(
            f"contact pair quadrature diverged for v_max={v_max}, r={r} (abserr={abserr})"
        )
    logger.debug(f"contact pairs v_max={v_max} r={r} n={n}: {result:.6g} (abserr {abserr:.2g})")
    return result


def velocity_phi(v_max: float, r: float) -> float:
    """
    Piecewise approximation of velocity-model conductance.

        r/2 + v^2/(3r)                           for v <= r/2
        -r^3/(48 v^2) + r^2/(6 v) + 2v/3         otherwise
    """
    if not r > 0:
        raise InvalidParameterError(f"r must be positive: {r}")
    if v_max < 0:
        raise InvalidParameterError(f"v_max must be non-negative: {v_max}")
    v = float(v_max)
    if v <= r / 2.0:
        return r / 2.0 + v * v / (3.0 * r)
    return -r ** 3 / (48.0 * v * v) + r * r / (6.0 * v) + 2.0 * v / 3.0


def velocity_prediction(v_max: float, r: float, n: int = 0) -> Prediction:
    """velocity_phi wrapped as an APPROXIMATION prediction."""
    return Prediction(
        model=MobilityKind.VELOCITY_CONSTRAINED.value,
        n=n,
        r=r,
        param=v_max,
        phi=velocity_phi(v_max, r),
        kind=PredictionKind.APPROXIMATION,
    )


def _check_epsilon(epsilon: float):
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameterError(f"epsilon must lie in (0, 1): {epsilon}")


def spreading_time_bound(n: int, epsilon: float, phi: float, c: float = 1.0) -> int:
    """
    Spreading-time bound ceil(c * (log n + log(1/epsilon)) / phi).

    Raises:
        InvalidParameterError: if phi <= 0 (a graph that stays disconnected
            under mobility has no finite bound) or epsilon, c are out of range
    """
    _check_n(n)
    _check_epsilon(epsilon)
    if not phi > 0:
        raise InvalidParameterError(f"conductance must be positive for a finite bound: {phi}")
    if not c > 0:
        raise InvalidParameterError(f"constant must be positive: {c}")
    return int(math.ceil(c * (math.log(n) + math.log(1.0 / epsilon)) / phi))


def optimal_time_floor(n: int) -> int:
    """ceil(log2 n): the informed set can at most double per slot."""
    _check_n(n)
    return (int(n) - 1).bit_length()


def mobility_connectivity_ratio(n: int, r: float, v_max: float) -> float:
    """
    (v_max + r) / sqrt(log n / n).

    A ratio bounded away from zero as n grows is the condition for the
    network to stay connected under mobility.
    """
    if v_max < 0 or not r > 0:
        raise InvalidParameterError(f"need v_max >= 0 and r > 0: {v_max}, {r}")
    return (v_max + r) / static_phi(n)
