import numpy as np
import pytest

from fringelab import DensityMatrix, GramMatrix, from_pure_amplitudes


def three_path(lam):
    return DensityMatrix(np.array([[1, -lam, lam], [-lam, 1, -lam], [lam, -lam, 1]]) / 3)


def three_path_decohered(lam):
    return DensityMatrix(np.array([[1, -lam, 0], [-lam, 1, 0], [0, 0, 1]]) / 3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def uniform4():
    return from_pure_amplitudes([0.5] * 4)


@pytest.fixture
def detector4():
    g = np.ones((4, 4))
    g[:3, 3] = g[3, :3] = 0
    return GramMatrix(g)


@pytest.fixture
def decohered4():
    m = np.full((4, 4), 0.25)
    m[:3, 3] = m[3, :3] = 0
    return DensityMatrix(m)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
