"""
Result Writer

Result rows, their CSV serialization and the companion run manifest.
"""

import logging
import math
import platform
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
import scipy
import yaml

from ..config.config_loader import ExperimentConfig
from ..core.errors import InvalidParameterError, ResultWriteError
from ..utils.file_operations import (
    is_stdout,
    sha256_of_bytes,
    sha256_of_file,
    write_table,
    write_text,
)
from ..version import __version__

logger = logging.getLogger(__name__)

SORT_KEYS = ["experiment", "model", "n", "param", "metric"]


@dataclass(frozen=True)
class ResultRow:
    """One metric at one grid point."""
    experiment: str
    model: str
    n: int
    r: float
    param: Optional[float]
    metric: str
    value: float
    std_error: Optional[float]
    rounds: int
    seed: int

    def __post_init__(self):
        for name in ('r', 'value'):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite: {getattr(self, name)}")
        if self.std_error is not None and not math.isfinite(self.std_error):
            raise InvalidParameterError(f"std_error must be finite: {self.std_error}")


RESULT_COLUMNS = [f.name for f in fields(ResultRow)]


def rows_frame(rows: Sequence[ResultRow]) -> pd.DataFrame:
    """Rows as a DataFrame in the deterministic output order."""
    frame = pd.DataFrame.from_records([astuple(row) for row in rows], columns=RESULT_COLUMNS)
    frame = frame.sort_values(SORT_KEYS, kind='mergesort', na_position='first')
    return frame.reset_index(drop=True)


def write_csv(rows: Sequence[ResultRow], path: Optional[Union[str, Path]]):
    """
    Write result rows as CSV sorted by experiment, model, n, param and metric.

    Absent standard errors and parameters are written as empty fields.

    Raises:
        ResultWriteError: for an empty row set (no file is created) or an
            unwritable path
    """
    rows = list(rows)
    if not rows:
        raise ResultWriteError("no result rows to write")
    write_table(rows_frame(rows), path)


def config_digest(config: ExperimentConfig) -> str:
    """SHA256 of the result-determining sections (experiment, world, models)."""
    data = config.to_dict()
    relevant = {key: data[key] for key in ('experiment', 'world', 'models')}
    text = yaml.safe_dump(relevant, default_flow_style=False, sort_keys=True)
    return sha256_of_bytes(text.encode('utf-8'))


def manifest_path(output: Union[str, Path]) -> Path:
    return Path(f"{output}.manifest.txt")


def manifest_text(
    config: ExperimentConfig,
    rows: Sequence[ResultRow],
    results_sha256: Optional[str] = None,
) -> str:
    """Manifest body; contains no timestamps so identical runs give identical files."""
    lines = [
        "mobile-gossip run manifest",
        f"experiment: {config.experiment.kind}",
        f"config_sha256: {config_digest(config)}",
        f"master_seed: {config.seed}",
        f"rows: {len(rows)}",
    ]
    if results_sha256 is not None:
        lines.append(f"results_sha256: {results_sha256}")
    lines += [
        f"mobile_gossip: {__version__}",
        f"python: {platform.python_version()}",
        f"numpy: {np.__version__}",
        f"scipy: {scipy.__version__}",
        f"pandas: {pd.__version__}",
        f"pyyaml: {yaml.__version__}",
    ]
    return "\n".join(lines) + "\n"


def write_manifest(config: ExperimentConfig, rows: Sequence[ResultRow], output: Union[str, Path]) -> Optional[Path]:
    """
    Write ``<output>.manifest.txt`` next to a result file.

    Returns:
        The manifest path, or None when results went to standard output
    """
    if is_stdout(output):
        return None
    target = manifest_path(output)
    write_text(manifest_text(config, rows, sha256_of_file(output)), target)
    logger.info(f"Wrote manifest {target}")
    return target

