"""
Mobility Model Registry

This module defines all supported mobility models and the parameters each
one requires. It provides a centralized registry of model specifications
and the MobilitySpec value passed between the simulator modules.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from .errors import InvalidParameterError

MAX_SPEED = 2 ** 0.5


class MobilityKind(Enum):
    """Enumeration of all supported mobility models."""
    STATIC = "static"
    FULLY_RANDOM = "fully-random"
    PARTIALLY_RANDOM = "partially-random"
    VELOCITY_CONSTRAINED = "velocity"
    AREA_CONSTRAINED_1D = "area-1d"
    AREA_CONSTRAINED_2D = "area-2d"


@dataclass(frozen=True)
class MobilityKindSpec:
    """
    Specification for a mobility model.

    Attributes:
        kind: The MobilityKind enum value
        required_params: MobilitySpec fields that must be set for this kind
        principal_param: Field reported as the model's parameter in result rows
        description: Human readable summary
    """
    kind: MobilityKind
    required_params: Tuple[str, ...]
    principal_param: Optional[str]
    description: str


# Mobility model registry
MOBILITY_REGISTRY: Dict[MobilityKind, MobilityKindSpec] = {
    MobilityKind.STATIC: MobilityKindSpec(
        kind=MobilityKind.STATIC,
        required_params=(),
        principal_param=None,
        description="nodes never move",
    ),
    MobilityKind.FULLY_RANDOM: MobilityKindSpec(
        kind=MobilityKind.FULLY_RANDOM,
        required_params=(),
        principal_param=None,
        description="uniform on the square, i.i.d. over slots",
    ),
    MobilityKind.PARTIALLY_RANDOM: MobilityKindSpec(
        kind=MobilityKind.PARTIALLY_RANDOM,
        required_params=("k",),
        principal_param="k",
        description="k randomly chosen nodes move fully randomly, the rest stay",
    ),
    MobilityKind.VELOCITY_CONSTRAINED: MobilityKindSpec(
        kind=MobilityKind.VELOCITY_CONSTRAINED,
        required_params=("v_max",),
        principal_param="v_max",
        description="uniform in the disk of radius v_max around the current position",
    ),
    MobilityKind.AREA_CONSTRAINED_1D: MobilityKindSpec(
        kind=MobilityKind.AREA_CONSTRAINED_1D,
        required_params=("n_v", "n_h"),
        principal_param="n_v",
        description="n_v nodes move vertically, n_h horizontally, fully random on their line",
    ),
    MobilityKind.AREA_CONSTRAINED_2D: MobilityKindSpec(
        kind=MobilityKind.AREA_CONSTRAINED_2D,
        required_params=("r_c",),
        principal_param="r_c",
        description="uniform in the disk of radius r_c around a fixed home point",
    ),
}

_PARAM_FIELDS = ("k", "v_max", "n_v", "n_h", "r_c")


@dataclass(frozen=True)
class MobilitySpec:
    """
    Which transition law applies, with the parameters that law needs.

    Parameters are present iff the kind requires them; ``validate(n)``
    checks the node-count dependent invariants.
    """
    kind: MobilityKind
    k: Optional[int] = None
    v_max: Optional[float] = None
    n_v: Optional[int] = None
    n_h: Optional[int] = None
    r_c: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, 'kind', parse_kind(self.kind))
        required = get_mobility_spec(self.kind).required_params
        for name in _PARAM_FIELDS:
            value = getattr(self, name)
            if name in required and value is None:
                raise InvalidParameterError(f"{self.kind.value} requires parameter '{name}'")
            if name not in required and value is not None:
                raise InvalidParameterError(f"{self.kind.value} does not take parameter '{name}'")

        if self.k is not None and self.k < 0:
            raise InvalidParameterError(f"k must be non-negative: {self.k}")
        if self.v_max is not None and not (0.0 <= self.v_max <= MAX_SPEED):
            raise InvalidParameterError(f"v_max must lie in [0, sqrt(2)]: {self.v_max}")
        if self.n_v is not None and (self.n_v < 0 or self.n_h < 0):
            raise InvalidParameterError(f"n_v and n_h must be non-negative: {self.n_v}, {self.n_h}")
        if self.r_c is not None and not self.r_c > 0:
            raise InvalidParameterError(f"r_c must be positive: {self.r_c}")

    def validate(self, n: int):
        """Check the invariants that depend on the node count."""
        if self.k is not None and self.k > n:
            raise InvalidParameterError(f"k must not exceed n={n}: {self.k}")
        if self.n_v is not None and self.n_v + self.n_h != n:
            raise InvalidParameterError(f"n_v + n_h must equal n={n}: {self.n_v} + {self.n_h}")

    @property
    def param(self) -> Optional[float]:
        """The model's principal parameter (k, v_max, n_v or r_c), if any."""
        name = get_mobility_spec(self.kind).principal_param
        return getattr(self, name) if name else None

    @property
    def label(self) -> str:
        return self.kind.value

    def describe(self) -> str:
        params = ", ".join(
            f"{name}={getattr(self, name)}" for name in _PARAM_FIELDS if getattr(self, name) is not None
        )
        return f"{self.kind.value}({params})" if params else self.kind.value


def get_mobility_spec(kind: MobilityKind) -> MobilityKindSpec:
    """
    Get the registry entry for a mobility kind.

    Args:
        kind: The MobilityKind enum value

    Returns:
        MobilityKindSpec for the kind
    """
    return MOBILITY_REGISTRY[kind]


def get_all_kinds() -> List[MobilityKind]:
    """Get all available mobility kinds."""
    return list(MobilityKind)


def parse_kind(name: str) -> MobilityKind:
    """
    Parse a model name as used in configs and on the command line.

    Accepts the enum value ('fully-random'), the enum name
    ('FULLY_RANDOM') or snake case ('fully_random').
    """
    normalized = name.strip().lower().replace("_", "-")
    for kind in MobilityKind:
        if normalized in (kind.value, kind.name.lower().replace("_", "-")):
            return kind
    valid = ", ".join(kind.value for kind in MobilityKind)
    raise InvalidParameterError(f"Unknown mobility model: {name} (valid: {valid})")
