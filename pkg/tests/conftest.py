"""
Pytest configuration for syncmdp tests.

Provides:
- Custom CLI options for corpus sizes
- Settings and limits fixtures
- The built-in example models
- Seed lists for the oracle and reduction corpora
"""

import os
import sys
import logging
from pathlib import Path
from typing import Dict, List

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.generators import ExampleModel, all_examples
from src.utils.settings import Limits, Settings, load_settings

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent


# === CLI Options ===

def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--corpus-size",
        action="store",
        type=int,
        default=int(os.getenv("SYNCMDP_CORPUS_SIZE", "500")),
        help="Number of seeded random models in the oracle corpus"
    )
    parser.addoption(
        "--reduction-size",
        action="store",
        type=int,
        default=int(os.getenv("SYNCMDP_REDUCTION_SIZE", "200")),
        help="Number of seeded instances per reduction property"
    )


def pytest_configure(config):
    """Register markers also declared in pytest.ini."""
    config.addinivalue_line("markers", "smoke: Fast unit checks")
    config.addinivalue_line("markers", "e2e: Command line end to end")


@pytest.fixture(scope="session")
def corpus_seeds(request) -> List[int]:
    return list(range(request.config.getoption("--corpus-size")))


@pytest.fixture(scope="session")
def reduction_seeds(request) -> List[int]:
    return list(range(request.config.getoption("--reduction-size")))


# === Settings ===

@pytest.fixture(scope="session")
def settings() -> Settings:
    """Project settings from config/config.yaml."""
    return load_settings(str(PROJECT_ROOT / "config"))


@pytest.fixture(scope="session")
def limits() -> Limits:
    """Library defaults; tests must not depend on a local config file."""
    return Limits()


# === Example models ===

@pytest.fixture(scope="session")
def fixtures() -> Dict[str, ExampleModel]:
    """All built-in example models by name."""
    examples = {example.name: example for example in all_examples()}
    logger.info(f"Loaded {len(examples)} example models")
    return examples
