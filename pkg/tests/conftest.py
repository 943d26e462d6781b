import numpy as np
import pytest

from cgofaddeev.conductivity import SMOOTH_BUMP, dirac_potential, make_model
from cgofaddeev.geometry import circle_contour
from cgofaddeev.operators import build_discretization


class SmallSetup:
    """Seeded small-jump bump model on a coarse mesh, shared by solver tests."""

    def __init__(self, n_radial=16, n_angular=64, n_gamma=64, n_boundary=256,
                 gamma_in=1.02 + 0.01j):
        self.model = make_model(SMOOTH_BUMP, gamma_in=gamma_in, bumps=[(0.45, 0.5, 0.3 + 0.2j)])
        self.area = self.model.support_mesh(n_radial, n_angular)
        self.gamma = circle_contour(-0.5, 0.2, n_gamma)
        self.boundary = circle_contour(0, 1, n_boundary)
        self.disc = build_discretization(self.area, self.gamma, self.boundary)
        self.potential = dirac_potential(self.model, self.area, self.gamma)


@pytest.fixture(scope="session")
def small_setup():
    return SmallSetup()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
