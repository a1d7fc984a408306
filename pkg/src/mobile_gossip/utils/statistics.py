"""
Statistics helpers for Monte-Carlo aggregation.
"""

import math
from typing import Optional, Sequence, Tuple

import numpy as np


def mean_and_stderr(values: Sequence[float]) -> Tuple[float, Optional[float]]:
    """
    Sample mean and standard error of the mean.

    Returns (nan, None) for no values and (mean, None) for a single value,
    since one replicate carries no spread information.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        return math.nan, None
    mean = float(data.mean())
    if data.size == 1:
        return mean, None
    return mean, float(data.std(ddof=1) / math.sqrt(data.size))
