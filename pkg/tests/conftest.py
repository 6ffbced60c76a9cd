"""Pytest configuration and fixtures"""

import itertools
import os
import shutil
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from src.model import Clause, CnfFormula, Hypergraph, complete_formula


@pytest.fixture(autouse=True)
def isolated_config(tmp_path):
    """Every test runs on built-in defaults, never on a local alphasat.yaml"""
    env = {"ALPHASAT_CONFIG": str(tmp_path / "missing.yaml")}
    with patch.dict(os.environ, env):
        os.environ.pop("ALPHASAT_COVERAGE_CAP", None)
        os.environ.pop("ALPHASAT_DATA_DIR", None)
        yield env


@pytest.fixture
def temp_data_dir():
    """Create a temporary directory for test data"""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture
def mock_env_vars(temp_data_dir):
    """Point the results store at a temporary directory"""
    env_vars = {
        "ALPHASAT_DATA_DIR": str(temp_data_dir / "results"),
        "ALPHASAT_COVERAGE_CAP": "20",
    }
    with patch.dict(os.environ, env_vars):
        yield env_vars


@pytest.fixture(autouse=True, scope="session")
def cleanup_test_directories():
    """Clean up the test-data directory before and after all tests"""
    data_dir = Path("./test-data")
    if data_dir.exists():
        shutil.rmtree(data_dir)
    yield
    if data_dir.exists():
        shutil.rmtree(data_dir)


@pytest.fixture
def path_hypergraph():
    """Edges {0,1},{1,2},{2,3}"""
    return Hypergraph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def k9():
    """All 36 pairs on 9 vertices"""
    return Hypergraph(9, tuple(itertools.combinations(range(9), 2)))


@pytest.fixture
def shrink_example():
    """Degrees 0:3, 1:2, 3:2, 5:2, every other vertex 1"""
    return Hypergraph(7, ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5)))


@pytest.fixture
def complete2():
    return complete_formula(2)


@pytest.fixture
def contradiction():
    """(x0) and (~x0)"""
    return CnfFormula(1, (Clause(((0, False),)), Clause(((0, True),))))
