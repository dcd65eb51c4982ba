import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from radialbc import Channel, Coulomb, RadialProblem, spectrum  # noqa: E402

ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def hydrogen_states():
    return spectrum(RadialProblem(Channel(0, 1.0), Coulomb(1.0)), 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
