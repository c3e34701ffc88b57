import math

import numpy as np
import pytest

from fspectra.fourier import Fourier1, Fourier2, evaluate_grid, grid_nodes
from fspectra.sampling import DEFAULT_SEED

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def wobble():
    return Fourier1(1.0, [0.0, 0.5], [0.0, 0.0])


def quad_s1(func, nodes=4096):
    """Trapezoid integral of a callable over one period."""
    t = grid_nodes(nodes)
    return float(np.sum(func(t)) * 2 * math.pi / nodes)


def quad_t2(func, nodes=256):
    t = grid_nodes(nodes)
    X, Y = np.meshgrid(t, t, indexing="ij")
    return float(np.sum(func(X, Y)) * (2 * math.pi / nodes) ** 2)


def random_series(rng, manifold, N):
    if manifold == "s1":
        return Fourier1(rng.normal(), rng.normal(size=N), rng.normal(size=N))
    return Fourier2(rng.normal(size=(2 * N + 1, 2 * N + 1)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
