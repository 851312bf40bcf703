import numpy as np
import pytest

from git_channel import presets


@pytest.fixture(scope="session")
def reference_params():
    """Gold-sphere benchmark point with the coupling tuned to its optimum."""
    return presets.gold_sphere_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
