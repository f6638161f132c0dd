import os

# Keep test runs from writing a debug log next to the sources.
os.environ.setdefault("DGSIAC_FILE_LOGGING", "false")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from core.config import reload_settings  # noqa: E402
from harness.problems import get_problem  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings():
    reload_settings()
    yield
    reload_settings()


@pytest.fixture
def log_slope():
    """Observed order between the two finest entries of an error ladder."""

    def slope(step_counts, errors):
        return float(np.log(errors[-2] / errors[-1]) / np.log(step_counts[-1] / step_counts[-2]))

    return slope


@pytest.fixture
def decay_error():
    """Error at t=1 of an integrator on u' = -u, u(0) = 1, with n uniform steps."""

    def run(step, steps, dtype=np.float64):
        dt = dtype(1) / steps
        u = np.array([1], dtype=dtype)
        for n in range(steps):
            u = step(u, n * dt, dt, lambda t, v: -v)
        return float(abs(u[0] - np.exp(dtype(-1))))

    return run


@pytest.fixture
def linear_problem():
    return get_problem("linear")


@pytest.fixture
def variable_problem():
    return get_problem("variable")


@pytest.fixture
def burgers_problem():
    return get_problem("burgers")


@pytest.fixture
def ladder_for():
    """dtype and step counts that keep an order-q decay ladder above roundoff."""

    def choose(order):
        if order >= 6:
            return np.longdouble, [6, 12, 24]
        if order >= 4:
            return np.longdouble, [8, 16, 32]
        return np.float64, [20, 40, 80]

    return choose
