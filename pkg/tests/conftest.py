import numpy as np
import pytest

from nuentangle.state import build_density_matrix

BELL_THETA, BELL_PHI = np.pi / 8, np.pi / 2


@pytest.fixture
def bell():
    """Real-coherence Bell point: rho22 = rho33 = 1/2, rho23 = -1/2."""
    return build_density_matrix(BELL_THETA, BELL_PHI)


@pytest.fixture
def product():
    return build_density_matrix(0.3, 0.0)


@pytest.fixture
def imaginary_coherence():
    """theta = phi = pi/4: rho23 = -i/2."""
    return build_density_matrix(np.pi / 4, np.pi / 4)


def x_state(r11=0.0, r22=0.5, r33=0.5, r23=0.0):
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[1, 1], rho[2, 2] = r11, r22, r33
    rho[1, 2] = r23
    rho[2, 1] = np.conj(r23)
    return rho


@pytest.fixture(scope="session")
def theta_phi_grid():
    theta = np.linspace(0, np.pi / 2, 50)
    phi = np.linspace(0, np.pi, 50)
    return np.meshgrid(theta, phi, indexing="ij")


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line per acceptance criterion."""

    def report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
