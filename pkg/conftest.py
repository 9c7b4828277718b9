from __future__ import annotations

import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from pmatrix_toolkit.linalg import Matrix
from pmatrix_toolkit.settings import get_settings
from pmatrix_toolkit.zoo.presets import load_presets

settings.register_profile(
    "default",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run acceptance-size checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-size run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    for var in ("PMAT_MINOR_CAP", "PMAT_WITNESS_CAP", "PMAT_LCP_CAP", "PMAT_TOL", "PMAT_LCP_TOL", "PMAT_SEED", "PMAT_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def identity3() -> Matrix:
    return Matrix.identity(3)


@pytest.fixture
def swap2() -> Matrix:
    return Matrix.from_rows([[0, 1], [1, 0]])


@pytest.fixture
def i2_minus() -> Matrix:
    # P fails only at the full minor: det = 1 - 4 = -3
    return Matrix.from_rows([[1, 2], [2, 1]])


@pytest.fixture
def rational_p() -> Matrix:
    return Matrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(-1, 4), 1]])


@pytest.fixture
def presets():
    return load_presets()
