"""
Configuration Loader

This module provides experiment configuration loading and validation.
A configuration is a YAML file with the sections ``experiment``,
``world``, ``models``, ``runtime``, ``logging`` and ``progress``; every
section is parsed into a dataclass and unknown keys are rejected.
"""

import logging
import math
import os
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from ..core.errors import ConfigError, InvalidParameterError
from ..core.geometry import MAX_RADIUS, Boundary, WorldConfig, default_radius
from ..core.mobility_config import MobilitySpec, parse_kind
from ..utils.logger_setup import get_default_log_file

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')
VALID_MODES = ('pushpull', 'push', 'pull')
VALID_CUTS = ('sweep', 'bisect', 'random', 'exhaustive')
VALID_SAMPLING = ('stationary', 'conditioned')


class ExperimentKind(Enum):
    """Experiments the harness can run."""
    SPREAD = "spread"
    CONDUCTANCE = "conductance"
    DENSITY = "density"
    SWEEP = "sweep"
    INCREMENT = "increment"
    CONNECTIVITY = "connectivity"


@dataclass
class ExperimentSection:
    """What to run and how many replications."""
    kind: str = "spread"
    n_values: List[int] = field(default_factory=lambda: [1000])
    epsilon: float = 0.05
    rounds: int = 1000
    sources: int = 10
    seed: int = 0
    mode: str = "pushpull"
    max_slots: Optional[int] = None
    samples: int = 200
    cuts: List[str] = field(default_factory=lambda: ["bisect", "sweep"])
    random_cuts: int = 16
    sampling: str = "stationary"
    trials: int = 100
    bins: int = 20
    node_samples: int = 100000
    informed_sets: int = 20
    informed_fractions: List[float] = field(default_factory=lambda: [0.1, 0.25, 0.5])


@dataclass
class WorldSection:
    """World template; r defaults to sqrt(8 log n / (pi n)) per n."""
    r: Optional[float] = None
    boundary: str = "square"


@dataclass
class ModelEntry:
    """
    One mobility model of the grid.

    Parameters are given either absolutely or relative to the grid point:
    k_fraction * n, n_v_fraction * n, v_max_over_r * r, v_max_sqrt_n / sqrt(n)
    and r_c_over_r * r.
    """
    kind: str = "fully-random"
    k: Optional[int] = None
    k_fraction: Optional[float] = None
    v_max: Optional[float] = None
    v_max_over_r: Optional[float] = None
    v_max_sqrt_n: Optional[float] = None
    n_v: Optional[int] = None
    n_h: Optional[int] = None
    n_v_fraction: Optional[float] = None
    r_c: Optional[float] = None
    r_c_over_r: Optional[float] = None

    def resolve(self, n: int, r: float) -> MobilitySpec:
        """
        Concrete MobilitySpec at node count n and radius r.

        Raises:
            InvalidParameterError: if the parameters do not fit the kind
        """
        kind = parse_kind(self.kind)
        params: Dict[str, Any] = {}

        k = _pick("k", self.k, k_fraction=self.k_fraction)
        if k is not None:
            params["k"] = self.k if self.k is not None else int(round(self.k_fraction * n))

        v_forms = dict(v_max_over_r=self.v_max_over_r, v_max_sqrt_n=self.v_max_sqrt_n)
        if _pick("v_max", self.v_max, **v_forms) is not None:
            if self.v_max is not None:
                params["v_max"] = float(self.v_max)
            elif self.v_max_over_r is not None:
                params["v_max"] = min(self.v_max_over_r * r, MAX_RADIUS)
            else:
                params["v_max"] = min(self.v_max_sqrt_n / math.sqrt(n), MAX_RADIUS)

        if _pick("n_v", self.n_v, n_v_fraction=self.n_v_fraction) is not None or self.n_h is not None:
            if self.n_v_fraction is not None:
                n_v = int(round(self.n_v_fraction * n))
            elif self.n_v is not None:
                n_v = self.n_v
            else:
                n_v = n - self.n_h
            params["n_v"] = n_v
            params["n_h"] = self.n_h if self.n_h is not None else n - n_v

        if _pick("r_c", self.r_c, r_c_over_r=self.r_c_over_r) is not None:
            params["r_c"] = float(self.r_c) if self.r_c is not None else self.r_c_over_r * r

        spec = MobilitySpec(kind=kind, **params)
        spec.validate(n)
        return spec


def _pick(name: str, absolute, **relative):
    given = [key for key, value in relative.items() if value is not None]
    if absolute is not None:
        given.append(name)
    if len(given) > 1:
        raise InvalidParameterError(f"give only one of {', '.join(sorted(given))}")
    return True if given else None


@dataclass
class RuntimeConfig:
    """Execution and output settings."""
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    output: Optional[str] = None
    dump_trajectories: Optional[str] = None
    dump_estimates: Optional[str] = None
    manifest: bool = True


@dataclass
class LoggingConfig:
    """Logging configuration settings."""
    level: str = "INFO"
    file: Optional[str] = None
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class ProgressConfig:
    """Progress tracking configuration settings."""
    show_bar: bool = False
    show_statistics: bool = True
    update_interval: int = 50


@dataclass
class ExperimentConfig:
    """Complete experiment configuration."""
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    world: WorldSection = field(default_factory=WorldSection)
    models: List[ModelEntry] = field(default_factory=lambda: [ModelEntry()])
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    progress: ProgressConfig = field(default_factory=ProgressConfig)

    @property
    def kind(self) -> ExperimentKind:
        return ExperimentKind(self.experiment.kind)

    @property
    def seed(self) -> int:
        return self.experiment.seed

    @property
    def output_path(self) -> Optional[str]:
        return self.runtime.output

    def radius_for(self, n: int) -> float:
        return self.world.r if self.world.r is not None else default_radius(n)

    def world_for(self, n: int) -> WorldConfig:
        """WorldConfig of the grid point with n nodes."""
        return WorldConfig(
            n=n,
            r=self.radius_for(n),
            boundary=Boundary(self.world.boundary),
            seed=self.experiment.seed,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data form, as written by ConfigLoader.save()."""
        data = asdict(self)
        data['models'] = [
            {key: value for key, value in entry.items() if value is not None}
            for entry in data['models']
        ]
        return data


SECTION_TYPES = {
    'experiment': ExperimentSection,
    'world': WorldSection,
    'runtime': RuntimeConfig,
    'logging': LoggingConfig,
    'progress': ProgressConfig,
}


def _key_lines(node, prefix: str = "", lines: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    """Map dotted key paths of a composed YAML document to 1-based line numbers."""
    if lines is None:
        lines = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
            lines[path] = key_node.start_mark.line + 1
            _key_lines(value_node, path, lines)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            path = f"{prefix}[{i}]"
            lines[path] = item.start_mark.line + 1
            _key_lines(item, path, lines)
    return lines


class ConfigLoader:
    """
    Loads and validates experiment configuration from YAML files.

    Provides default configuration and environment variable overrides.
    """

    ENV_PREFIX = "MGOSSIP_"

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the configuration loader.

        Args:
            config_path: Path to configuration file (optional)
        """
        self.config_path = config_path
        self.config = ExperimentConfig()
        self._lines: Dict[str, int] = {}

    def load(self) -> ExperimentConfig:
        """
        Load configuration from file and environment variables.

        Returns:
            Validated ExperimentConfig

        Raises:
            ConfigError: on unreadable files, YAML syntax errors, unknown
                keys or invalid values
        """
        if self.config_path:
            self._load_from_file(self.config_path)

        self._apply_env_overrides()
        self.validate()
        return self.config

    def _error(self, message: str, path: str) -> ConfigError:
        return ConfigError(message, field=path, line=self._lines.get(path))

    def _load_from_file(self, config_path: str):
        """Load configuration from a YAML file."""
        try:
            text = Path(config_path).read_text()
        except OSError as e:
            raise ConfigError(f"Cannot read configuration {config_path}: {e}") from e

        try:
            data = yaml.safe_load(text)
            root = yaml.compose(text)
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigError(f"Cannot parse {config_path}: {e}", line=line) from e

        self._lines = _key_lines(root) if root is not None else {}
        if not data:
            return
        if not isinstance(data, dict):
            raise ConfigError(f"{config_path} must contain a mapping of sections", line=1)

        self.config = self.from_dict(data)
        logger.info(f"Loaded configuration from {config_path}")

    def from_dict(self, data: Dict[str, Any]) -> ExperimentConfig:
        """Build an ExperimentConfig from plain data, rejecting unknown keys."""
        config = ExperimentConfig()
        for section, value in data.items():
            if section == 'models':
                config.models = self._parse_models(value)
            elif section in SECTION_TYPES:
                setattr(config, section, self._parse_section(section, SECTION_TYPES[section], value))
            else:
                raise self._error(f"Unknown configuration section '{section}'", section)
        return config

    def _parse_section(self, path: str, section_type, values):
        if values is None:
            return section_type()
        if not isinstance(values, dict):
            raise self._error(f"Section '{path}' must be a mapping", path)
        known = {f.name for f in fields(section_type)}
        for key in values:
            if key not in known:
                raise self._error(f"Unknown key '{key}' in section '{path}'", f"{path}.{key}")
        return section_type(**values)

    def _parse_models(self, values) -> List[ModelEntry]:
        if not isinstance(values, list) or not values:
            raise self._error("'models' must be a non-empty list", 'models')
        entries = []
        for i, value in enumerate(values):
            path = f"models[{i}]"
            if isinstance(value, str):
                value = {'kind': value}
            entries.append(self._parse_section(path, ModelEntry, value))
        return entries

    def _apply_env_overrides(self):
        """Apply environment variable overrides."""
        env = os.environ
        if env.get('MGOSSIP_OUTPUT'):
            self.config.runtime.output = env['MGOSSIP_OUTPUT']
        log_file = get_default_log_file()
        if log_file:
            self.config.logging.file = log_file
        if env.get('MGOSSIP_LOG_LEVEL'):
            self.config.logging.level = env['MGOSSIP_LOG_LEVEL']
        if env.get('MGOSSIP_WORKERS'):
            try:
                self.config.runtime.workers = int(env['MGOSSIP_WORKERS'])
            except ValueError as e:
                raise ConfigError(f"MGOSSIP_WORKERS must be an integer: {env['MGOSSIP_WORKERS']}",
                                  field='runtime.workers') from e

    def validate(self):
        """
        Validate configuration values.

        Raises:
            ConfigError: naming the first offending field
        """
        try:
            self._validate_config()
        except TypeError as e:
            raise ConfigError(f"Invalid value type in configuration: {e}") from e

    def _validate_config(self):
        cfg = self.config
        exp = cfg.experiment

        if exp.kind not in {kind.value for kind in ExperimentKind}:
            raise self._error(f"Invalid experiment kind: {exp.kind}", 'experiment.kind')
        if not exp.n_values:
            raise self._error("n_values must not be empty", 'experiment.n_values')
        if any(not isinstance(n, int) or n < 2 for n in exp.n_values):
            raise self._error(f"n_values must be integers >= 2: {exp.n_values}", 'experiment.n_values')
        if not 0.0 < exp.epsilon < 1.0:
            raise self._error(f"epsilon must lie in (0, 1): {exp.epsilon}", 'experiment.epsilon')
        for name in ('rounds', 'sources', 'samples', 'trials', 'bins', 'node_samples', 'informed_sets'):
            if getattr(exp, name) < 1:
                raise self._error(f"{name} must be at least 1: {getattr(exp, name)}", f'experiment.{name}')
        if exp.max_slots is not None and exp.max_slots < 1:
            raise self._error(f"max_slots must be at least 1: {exp.max_slots}", 'experiment.max_slots')
        if not 0 <= exp.seed < 2 ** 64:
            raise self._error(f"seed must be a 64-bit unsigned integer: {exp.seed}", 'experiment.seed')
        if exp.mode not in VALID_MODES:
            raise self._error(f"Invalid mode: {exp.mode}", 'experiment.mode')
        if not exp.cuts or any(cut not in VALID_CUTS for cut in exp.cuts):
            raise self._error(f"Invalid cuts: {exp.cuts}", 'experiment.cuts')
        if exp.random_cuts < 0:
            raise self._error(f"random_cuts must be non-negative: {exp.random_cuts}", 'experiment.random_cuts')
        if exp.sampling not in VALID_SAMPLING:
            raise self._error(f"Invalid sampling: {exp.sampling}", 'experiment.sampling')
        if not exp.informed_fractions or any(not 0.0 < f <= 0.5 for f in exp.informed_fractions):
            raise self._error(
                f"informed_fractions must lie in (0, 0.5]: {exp.informed_fractions}",
                'experiment.informed_fractions',
            )

        if cfg.world.boundary not in {b.value for b in Boundary}:
            raise self._error(f"Invalid boundary: {cfg.world.boundary}", 'world.boundary')
        if cfg.world.r is not None and not 0.0 < cfg.world.r <= MAX_RADIUS:
            raise self._error(f"r must lie in (0, sqrt(2)]: {cfg.world.r}", 'world.r')

        if not cfg.models:
            raise self._error("at least one model is required", 'models')
        for i, entry in enumerate(cfg.models):
            path = f"models[{i}]"
            for n in exp.n_values:
                try:
                    entry.resolve(n, cfg.radius_for(n))
                except InvalidParameterError as e:
                    raise self._error(f"Invalid model at n={n}: {e}", path) from e

        if cfg.runtime.workers < 1:
            raise self._error(f"workers must be at least 1: {cfg.runtime.workers}", 'runtime.workers')
        if cfg.logging.level.upper() not in VALID_LOG_LEVELS:
            raise self._error(f"Invalid log level: {cfg.logging.level}", 'logging.level')
        if cfg.progress.update_interval < 1:
            raise self._error(
                f"update_interval must be at least 1: {cfg.progress.update_interval}",
                'progress.update_interval',
            )

    def save(self, config_path: Optional[str]):
        """
        Save current configuration as YAML.

        Args:
            config_path: Target file; None or '-' writes to standard output
        """
        text = dump_config(self.config)
        if config_path in (None, '-'):
            print(text, end='')
            return
        try:
            Path(config_path).parent.mkdir(parents=True, exist_ok=True)
            Path(config_path).write_text(text)
        except OSError as e:
            raise ConfigError(f"Cannot write configuration {config_path}: {e}") from e
        logger.info(f"Saved configuration to {config_path}")


def dump_config(config: ExperimentConfig) -> str:
    """Canonical YAML text of a configuration."""
    return yaml.safe_dump(config.to_dict(), default_flow_style=False, sort_keys=False)


def load_config(config_path: Optional[str] = None) -> ExperimentConfig:
    """
    Convenience function to load configuration.

    Args:
        config_path: Optional path to configuration file

    Returns:
        Validated ExperimentConfig
    """
    loader = ConfigLoader(config_path)
    return loader.load()
