"""
File Operations

This module provides the output helpers shared by every CSV writer and
the SHA256 digests recorded in run manifests.
"""

import hashlib
import logging
import sys
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from ..core.errors import ResultWriteError

logger = logging.getLogger(__name__)

STDOUT_MARKERS = (None, "-")


def is_stdout(path: Optional[Union[str, Path]]) -> bool:
    """True when ``path`` designates standard output."""
    return path in STDOUT_MARKERS or str(path) == "-"


def write_table(frame: pd.DataFrame, path: Optional[Union[str, Path]] = None):
    """
    Write a DataFrame as CSV to a file or to standard output.

    Missing values are written as empty fields and the index is dropped.

    Args:
        frame: Table to write
        path: Output path; None or '-' means standard output

    Raises:
        ResultWriteError: if the file cannot be written
    """
    if is_stdout(path):
        frame.to_csv(sys.stdout, index=False)
        sys.stdout.flush()
        return

    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(target, index=False)
    except OSError as e:
        raise ResultWriteError(f"Cannot write {target}: {e}") from e
    logger.info(f"Wrote {len(frame)} rows to {target}")


def write_text(text: str, path: Union[str, Path]):
    """Write a text file, creating parent directories."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
    except OSError as e:
        raise ResultWriteError(f"Cannot write {target}: {e}") from e


def sha256_of_bytes(data: bytes) -> str:
    """Hexadecimal SHA256 digest of a byte string."""
    return hashlib.sha256(data).hexdigest()


def sha256_of_file(file_path: Union[str, Path]) -> Optional[str]:
    """
    Calculate the SHA256 checksum of a file.

    Returns:
        Hexadecimal checksum string, or None if the file cannot be read
    """
    sha256_hash = hashlib.sha256()
    try:
        with open(file_path, "rb") as f:
            for byte_block in iter(lambda: f.read(4096), b""):
                sha256_hash.update(byte_block)
    except OSError as e:
        logger.error(f"Failed to hash {file_path}: {e}")
        return None
    return sha256_hash.hexdigest()
