"""
Experiment Harness

Grid runner, result rows and CSV/manifest output.
"""

from ..config.config_loader import ExperimentConfig, ExperimentKind, load_config
from .experiment_runner import ExperimentRunner, GridPoint, run_experiment
from .result_writer import ResultRow, write_csv, write_manifest

__all__ = [
    'ExperimentConfig',
    'ExperimentKind',
    'load_config',
    'ExperimentRunner',
    'GridPoint',
    'run_experiment',
    'ResultRow',
    'write_csv',
    'write_manifest',
]
