"""Shared fixtures; also prints the acceptance summary at the end of a run."""

import pytest

from mfou.config import SimConfig

ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def small_config():
    """2^14 points, T = T_tot/128, eps = 4 dt, two trajectories."""
    return SimConfig.desk(n_points=2**14, n_traj=2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
