"""Shared fixtures: reference calibration values and synthetic data paths."""

from pathlib import Path

import pytest

from tests.published import GERMANY_FRONTIER, GERMANY_TABLE, US_FRONTIER, US_TABLE
from tfpdiff.core.types import FrontierParams

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def germany_frontier() -> FrontierParams:
    return GERMANY_FRONTIER


@pytest.fixture
def us_frontier() -> FrontierParams:
    return US_FRONTIER


@pytest.fixture
def germany_table() -> dict:
    return GERMANY_TABLE


@pytest.fixture
def us_table() -> dict:
    return US_TABLE


@pytest.fixture
def noiseless_csv() -> Path:
    return FIXTURES / "synthetic_noiseless.csv"


@pytest.fixture
def noisy_csv() -> Path:
    return FIXTURES / "synthetic_noise2pct.csv"
