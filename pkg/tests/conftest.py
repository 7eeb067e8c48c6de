"""
Shared fixtures for the greenspline test suite.
"""

import numpy as np
import pytest

from greenspline.numerics import RandomSource
from greenspline.schemas import DataSet


@pytest.fixture
def source():
    return RandomSource(1234)


@pytest.fixture
def single_point():
    """One observation (0.5, 1): the hand-solvable Dirichlet example."""
    return DataSet(times=[0.5], values=[1.0])


@pytest.fixture
def small_data():
    t = [0.1, 0.25, 0.4, 0.55, 0.7, 0.9]
    y = [0.3, -0.2, 0.8, 0.1, -0.5, 0.4]
    return DataSet(times=t, values=y)


@pytest.fixture
def write_csv(tmp_path):
    """Write raw CSV text and return the path."""
    def _write(text: str, name: str = "data.csv"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def bm_grid():
    return np.linspace(0.0, 1.0, 21)
