"""
Utility Functions

Logging, progress reporting, seeding, statistics and file output.
"""

from .logger_setup import setup_logger, get_default_log_file, log_level_from_string
from .progress_tracker import ProgressTracker, RunStats
from .seeding import SeedStream, as_stream
from .statistics import mean_and_stderr

__all__ = [
    'setup_logger',
    'get_default_log_file',
    'log_level_from_string',
    'ProgressTracker',
    'RunStats',
    'SeedStream',
    'as_stream',
    'mean_and_stderr',
]
