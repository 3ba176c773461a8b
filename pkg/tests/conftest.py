import numpy as np
import pytest

from s2dyn.geometry import project_tangent, renormalize
from s2dyn.models import SystemState


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run long-horizon invariant tests (10^5 steps and beyond)",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-horizon invariant test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def random_state(rng, n, w_scale=1.0):
    """A valid random state: unit rows, tangent velocities."""
    q = renormalize(rng.normal(size=(n, 3)))
    w = project_tangent(q, w_scale * rng.normal(size=(n, 3)))
    return SystemState(q, w, 0.0)


def random_config(rng, n, min_separation=0.2):
    """Random unit rows with pairwise angles bounded away from 0 and pi."""
    while True:
        q = renormalize(rng.normal(size=(n, 3)))
        dot = q @ q.T
        np.fill_diagonal(dot, 0.0)
        if np.max(np.abs(dot)) < 1.0 - min_separation:
            return q


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)
