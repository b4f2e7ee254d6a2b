import numpy as np
import pytest

from concord.objects import SystemSpec


@pytest.fixture
def reference() -> SystemSpec:
    """Five providers, thirty servers, moderate traffic."""
    return SystemSpec([9, 7, 6, 5, 3], 15.0, 1.0)


@pytest.fixture
def second() -> SystemSpec:
    return SystemSpec([10, 7, 6, 5, 4], 15.0, 1.0)


@pytest.fixture
def dominant() -> SystemSpec:
    """One provider owns more servers than the others together."""
    return SystemSpec([20, 3, 2], 10.0, 1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
