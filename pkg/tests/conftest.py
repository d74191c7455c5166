import pytest

from dressedgraphs.eigensolve import solve_spectrum
from dressedgraphs.graph import make_spec
from dressedgraphs.moments import build_table
from dressedgraphs.wavefunctions import assemble_states

ACCEPTANCE_LINES = []


def solved(topology, **params):
    spec = make_spec(topology, params)
    spectrum = solve_spectrum(spec, 25)
    states = assemble_states(spec, spectrum)
    return spec, spectrum, states


@pytest.fixture(scope="session")
def box():
    return solved("Wire1Delta", g=0.0, omega=0.3)


@pytest.fixture(scope="session")
def box_table(box):
    return build_table(box[2])


@pytest.fixture(scope="session")
def bound_wire():
    return solved("Wire1Delta", g=-5.0, omega=-0.44)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
