"""
Command Line Interface

Argument parsing and command execution for the mobile-gossip CLI.
"""

from .argument_parser import create_base_parser, parse_args
from .commands import build_config, main, theory_frame

__all__ = [
    'create_base_parser',
    'parse_args',
    'build_config',
    'main',
    'theory_frame',
]
