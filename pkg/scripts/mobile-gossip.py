#!/usr/bin/env python3
"""
Mobile Gossip - CLI wrapper

Runs the mobile-gossip command line without installing the package.

Examples:
    # Spreading time of the fully random model
    python3 scripts/mobile-gossip.py spread --model fully-random --n 512 --rounds 100

    # Closed-form velocity approximation
    python3 scripts/mobile-gossip.py theory --model velocity --r 0.1 --vmax 0.05

    # Run a preset
    python3 scripts/mobile-gossip.py sweep --config configs/presets/velocity_sweep.yaml
"""

import sys
import os

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from mobile_gossip.cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
