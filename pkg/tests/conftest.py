"""
Pytest configuration for sparsedecomp tests
"""

import logging
from collections.abc import Iterator
from pathlib import Path

import pytest

from sparsedecomp.tools.graph_core import Graph
from sparsedecomp.utils.config import DecompParams
from tests.fixtures.graphs import desk_params, two_bicliques

# Configure logging for tests
logging.basicConfig(
    level=logging.DEBUG,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)


@pytest.fixture(scope="session")
def test_dir() -> Path:
    """Get the test directory path"""
    return Path(__file__).parent


@pytest.fixture(scope="session")
def output_dir(test_dir: Path) -> Iterator[Path]:
    """Create and return the test output directory"""
    output_dir = test_dir / "test_output"
    output_dir.mkdir(exist_ok=True)
    yield output_dir
    # Clean up test output after tests
    for item in output_dir.glob("*"):
        if item.is_file():
            item.unlink()


@pytest.fixture
def params() -> DecompParams:
    """Desk-scale decomposition parameters for k = 8"""
    return desk_params()


@pytest.fixture
def bicliques() -> Graph:
    """Two disjoint copies of K(8,8) on 32 vertices"""
    return two_bicliques()
