import math

import numpy as np
import pytest

from sdlab.config import preset
from sdlab.spectral import PotentialModel, SpectralState, ho_eigenstate, ring_basis

from helpers import ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def v3_model():
    return PotentialModel.piecewise_ring(3.0)


@pytest.fixture(scope="session")
def v15_model():
    return PotentialModel.piecewise_ring(15.0)


@pytest.fixture(scope="session")
def v3_basis(v3_model):
    return ring_basis(v3_model, 900.0)


@pytest.fixture(scope="session")
def v15_basis(v15_model):
    return ring_basis(v15_model, 900.0)


@pytest.fixture(scope="session")
def eq5_state():
    return preset("eq5").build_state()


@pytest.fixture(scope="session")
def fig3_state():
    return preset("fig3").build_state()


@pytest.fixture(scope="session")
def fig4_state():
    return preset("fig4").build_state()


@pytest.fixture(scope="session")
def ho_cat():
    """(u_1 - u_3)/sqrt(2)."""
    return SpectralState([ho_eigenstate(1), ho_eigenstate(3)],
                         np.array([1.0, -1.0]) / math.sqrt(2.0))
