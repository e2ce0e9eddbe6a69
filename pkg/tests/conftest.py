"""Shared fixtures: the expensive runs are session-scoped and reused.

The workhorse configuration is p = 3, s = 0.5 on (-1, 1) with 200
cells; the long bump run uses an uncapped geometric lattice (t_end on
the lattice exactly) so every step has the same ratio.
"""

import pytest

import fracplap as fp

RATIO = 1.005
T0 = 1e-3
N_GEO = 2771  # t_end = T0 * RATIO**N_GEO ~ 1.004e3


@pytest.fixture(scope="session")
def prm3():
    return fp.Params(p=3.0, s=0.5)


@pytest.fixture(scope="session")
def grid200():
    return fp.make_grid(-1.0, 1.0, 200)


@pytest.fixture(scope="session")
def kw3(grid200, prm3):
    return fp.build_weights(grid200, prm3)


@pytest.fixture(scope="session")
def gp3(kw3, prm3):
    return fp.compute_giant(kw3, prm3, tol=1e-8)


@pytest.fixture(scope="session")
def ep3(kw3, prm3):
    return fp.compute_eigenpair(kw3, prm3, tol=1e-6)


@pytest.fixture(scope="session")
def geo_sched():
    return fp.TimeSchedule("geometric", T0, T0 * RATIO**N_GEO, ratio=RATIO)


@pytest.fixture(scope="session")
def traj_bump3(grid200, kw3, prm3, geo_sched):
    """Long bump run on the exact geometric lattice, ~2800 steps."""
    return fp.evolve(fp.bump_data(grid200), geo_sched, kw3, prm3, tol=1e-11)


@pytest.fixture(scope="session")
def prm15():
    return fp.Params(p=1.5, s=0.5)


@pytest.fixture(scope="session")
def kw15(grid200, prm15):
    return fp.build_weights(grid200, prm15)


@pytest.fixture(scope="session")
def traj_extinct(grid200, kw15, prm15):
    """Fast-diffusion bump run through its extinction time (~0.19)."""
    sched = fp.TimeSchedule("uniform", 0.0, 0.5, n_steps=2000)
    return fp.evolve(fp.bump_data(grid200), sched, kw15, prm15,
                     tol=1e-9, rel_floor=1.0)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance gate verdicts after the run, uncaptured."""
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.GATE_LINES:
        terminalreporter.section("acceptance gate")
        for line in test_acceptance.GATE_LINES:
            terminalreporter.write_line(line)
