import numpy as np
import pytest

from symrad import (GridSpec, Phantom, QuadratureSpec, SinogramSpec,
                    radon_forward)


# one PASS/FAIL verdict per acceptance criterion, filled by
# test_acceptance.py and echoed after the capture is torn down
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def centered():
    return Phantom.from_terms([(1.0, (0.0, 0.0), 1.0)])


@pytest.fixture(scope="session")
def two_gauss():
    return Phantom.from_terms([(0.6, (1.0, 0.5), 1.2),
                               (0.4, (-1.5, -0.5), 0.8)])


@pytest.fixture(scope="session")
def big_sspec():
    return SinogramSpec(n_angles=180, n_offsets=256, offset_halfwidth=8.0)


@pytest.fixture(scope="session")
def quad64():
    return QuadratureSpec(rule="gauss-legendre", n_nodes=64, s_halfwidth=10.0)


@pytest.fixture(scope="session")
def big_sinogram(centered, big_sspec, quad64):
    return radon_forward(centered, big_sspec, quad64)


@pytest.fixture(scope="session")
def two_gauss_sinogram(two_gauss, big_sspec, quad64):
    return radon_forward(two_gauss, big_sspec, quad64)


@pytest.fixture(scope="session")
def grid128():
    return GridSpec(dims=2, extent=5.0, samples=128)
