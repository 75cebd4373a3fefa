#!/usr/bin/env python3
"""
syncmdp - decide synchronizing objectives on finite MDPs.

Run from anywhere:
    python app/syncmdp.py check models/cobuchi.mdp --objective strong --mode almost \
        --target q_init,q2 --init q_init
"""

import sys
from pathlib import Path

# Get project root
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.cli.main import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
