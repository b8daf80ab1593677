import numpy as np
import pytest

LD = np.longdouble


@pytest.fixture
def pde_residual():
    """Finite-difference residual u_t + mu u_x - nu u_xx of problem.exact.

    Fourth-order central differences with step 1e-5, evaluated in extended
    precision: plain float64 second differences carry ~1e-5 rounding noise,
    far above the transcription tolerances being checked.
    """

    def probe(problem, x, t, step=1e-5):
        h = LD(step)
        x = LD(x)
        t = LD(t)
        u = problem.exact
        ut = (-u(x, t + 2 * h) + 8 * u(x, t + h)
              - 8 * u(x, t - h) + u(x, t - 2 * h)) / (12 * h)
        ux = (-u(x + 2 * h, t) + 8 * u(x + h, t)
              - 8 * u(x - h, t) + u(x - 2 * h, t)) / (12 * h)
        uxx = (-u(x + 2 * h, t) + 16 * u(x + h, t) - 30 * u(x, t)
               + 16 * u(x - h, t) - u(x - 2 * h, t)) / (12 * h * h)
        return float(ut + problem.mu * ux - problem.nu * uxx)

    return probe
