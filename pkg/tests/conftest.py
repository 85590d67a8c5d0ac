import numpy as np
import pytest

import compwave


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure the algorithms."""
    compwave.gamma(0.3)
    compwave.solve_tridiagonal([0.0], [1.0, 1.0], [1.0], [2.0, 1.0])
    compwave.solve_halfline(compwave.HalfLineProblem(0.5))
    compwave.solve_wave(compwave.SystemParams(10.0, 1.0, 1.0, 1.0))
    grid = compwave.Grid1D(-5.0, 5.0, 101)
    state = compwave.PdeState(grid, np.zeros(101), np.zeros(101))
    compwave.step(state, 0.01, compwave.SystemParams(10.0, 1.0, 1.0, 1.0))
