import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Keep test output readable; must be set before src.config is imported
os.environ.setdefault("STEPFIT_LOG_LEVEL", "WARNING")

from src.core.dataset import load_dataset  # noqa: E402
from src.core.models import GenConfig  # noqa: E402
from src.fitting.datagen import generate  # noqa: E402


def _make_data(xs, ps=None, on_duplicate="reject"):
    ps = list(range(len(xs))) if ps is None else ps
    return load_dataset(list(zip([float(p) for p in ps], [float(x) for x in xs])), on_duplicate=on_duplicate)


@pytest.fixture
def make_data():
    """Dataset from x values at p = 0, 1, 2, ... (or explicit p values)."""
    return _make_data


@pytest.fixture
def five_points():
    return _make_data([4, 4, 2, 2, 1])


@pytest.fixture(scope="session")
def noiseless_small():
    """Reference curve sampled at p = 0, 1, ..., 59."""
    return generate(GenConfig(I=60))


@pytest.fixture(scope="session")
def noisy_100():
    return generate(GenConfig(I=100, sigma=5.0, seed=3))
