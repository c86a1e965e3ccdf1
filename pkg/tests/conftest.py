import math

import numpy as np
import pytest

from wmt import Profile1D, gamma_energy, make_graded_grid, make_weight_params


@pytest.fixture(scope="session")
def p0():
    return make_weight_params(0.0)


@pytest.fixture(scope="session")
def p3():
    return make_weight_params(0.3)


@pytest.fixture(scope="session")
def p5():
    return make_weight_params(0.5)


def smooth_feasible_profile(rng, p, n=8192, t_max=30.0):
    """Smooth nonnegative profile with energy in (0.3, 0.95), fine grid.

    Built from analytic bumps so the piecewise-linear sampling error is
    O(grid^2) rather than kink-limited; used by the two-representation
    cross-check tests.
    """
    grid = make_graded_grid(t_max, n, 2.0)
    amp = rng.uniform(0.3, 1.5)
    a = rng.uniform(0.2, 2.0)
    b = rng.uniform(0.05, 0.6)
    vals = amp * (1 - np.exp(-a * grid)) + 0.3 * amp * np.sin(b * grid) * (
        1 - np.exp(-grid)
    )
    vals = np.abs(vals)
    vals[0] = 0.0
    psi = Profile1D(grid=grid, values=vals)
    energy = gamma_energy(psi, p)
    return psi.with_values(vals * math.sqrt(rng.uniform(0.3, 0.95) / energy))
