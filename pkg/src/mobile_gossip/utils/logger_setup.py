"""
Logger Setup

Logging configuration for the simulator. Console records go to standard
error so that CSV written to standard output stays clean; an optional
file handler mirrors them.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional

DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

DEFAULT_LOGGER_NAME = "mobile_gossip"

# File name used under $MGOSSIP_LOG_DIR
DEFAULT_LOG_FILE = "mobile_gossip.log"


def _attach(logger: logging.Logger, handler: logging.Handler, level: int, formatter: logging.Formatter):
    handler.setLevel(level)
    handler.setFormatter(formatter)
    logger.addHandler(handler)


def setup_logger(
    name: str = DEFAULT_LOGGER_NAME,
    level: int = logging.INFO,
    log_file: Optional[str] = None,
    log_format: Optional[str] = None,
    console: bool = True
) -> logging.Logger:
    """
    (Re)configure a logger; earlier handlers are closed and replaced.

    Args:
        name: Logger name
        level: Logging level for the logger and its handlers
        log_file: Also write records here; parent directories are created
        log_format: Record format (default: DEFAULT_LOG_FORMAT)
        console: Attach a standard error handler

    Returns:
        The configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(log_format or DEFAULT_LOG_FORMAT)
    if console:
        _attach(logger, logging.StreamHandler(sys.stderr), level, formatter)
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        _attach(logger, logging.FileHandler(log_file), level, formatter)
    return logger


def get_default_log_file() -> Optional[str]:
    """Log file under $MGOSSIP_LOG_DIR, or None when the variable is unset."""
    log_dir = os.environ.get('MGOSSIP_LOG_DIR')
    return os.path.join(log_dir, DEFAULT_LOG_FILE) if log_dir else None


def log_level_from_string(level_str: str) -> int:
    """Map a level name (any case) to its constant; unknown names give INFO."""
    level = logging.getLevelName(level_str.upper())
    return level if isinstance(level, int) else logging.INFO
