"""
Configuration

YAML experiment configuration: dataclass sections, loader and writer.
"""

from .config_loader import (
    ConfigLoader,
    ExperimentConfig,
    ExperimentKind,
    ExperimentSection,
    LoggingConfig,
    ModelEntry,
    ProgressConfig,
    RuntimeConfig,
    WorldSection,
    dump_config,
    load_config,
)

__all__ = [
    'ConfigLoader',
    'ExperimentConfig',
    'ExperimentKind',
    'ExperimentSection',
    'LoggingConfig',
    'ModelEntry',
    'ProgressConfig',
    'RuntimeConfig',
    'WorldSection',
    'dump_config',
    'load_config',
]
