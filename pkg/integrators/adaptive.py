"""
Iteration-adaptive SDG/SDC: sweep until the last stage stops changing.

The indicator after sweep k is the discrete L2 norm of u_{n,p}^k − u_{n,p}^{k-1}
over all DG coefficients; sweeping stops once it drops below ε or after Kmax
sweeps.
"""

import logging
from typing import Callable, List, Tuple

import numpy as np

from core.utils import InvalidArgumentError
from integrators.registry import IntegratorSpec, register_integrator
from integrators.sdc import SDCIntegrator, build_sdc_tableau
from integrators.sdg import SDGIntegrator, build_sdg_tableau
from integrators.sweeps import NodeSweeper

logger = logging.getLogger(__name__)


def _indicator(change: np.ndarray):
    return np.sqrt(np.sum(np.square(change)))


def adaptive_iterations(
    sweeper: NodeSweeper,
    u_n: np.ndarray,
    t_n,
    dt,
    rhs: Callable,
    epsilon: float,
    kmax: int,
) -> Tuple[np.ndarray, int]:
    """
    One adaptive step.

    Returns:
        (u_{n+1}, number of correction sweeps performed)
    """
    if not epsilon > 0:
        raise InvalidArgumentError(f"Adaptive tolerance must be positive, got {epsilon}")
    if kmax < 2:
        raise InvalidArgumentError(f"Adaptive sweep cap must be >= 2, got {kmax}")

    state = sweeper.predict(u_n, t_n, dt, rhs)
    for _ in range(kmax):
        updated = sweeper.sweep(state, u_n, t_n, dt, rhs)
        change = _indicator(updated.final - state.final)
        state = updated
        if change < epsilon:
            break
    return state.final, state.iteration


class AdaptiveIntegrator:
    """Wraps an SDG or SDC sweeper with the adaptive stopping rule."""

    def __init__(self, sweeper: NodeSweeper, epsilon: float, kmax: int):
        if not epsilon > 0:
            raise InvalidArgumentError(f"Adaptive tolerance must be positive, got {epsilon}")
        if kmax < 2:
            raise InvalidArgumentError(f"Adaptive sweep cap must be >= 2, got {kmax}")
        self.sweeper = sweeper
        self.epsilon = epsilon
        self.kmax = kmax
        self.name = f"adaptive-{sweeper.name}"
        self.iteration_counts: List[int] = []

    @property
    def degree(self) -> int:
        return self.sweeper.degree

    def reset(self) -> None:
        self.iteration_counts = []

    @property
    def mean_iterations(self) -> float:
        if not self.iteration_counts:
            return 0.0
        return sum(self.iteration_counts) / len(self.iteration_counts)

    def step(self, u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray:
        if not dt > 0:
            raise InvalidArgumentError(f"Time step must be positive, got {dt}")
        value, used = adaptive_iterations(self.sweeper, u, t, dt, rhs, self.epsilon, self.kmax)
        self.iteration_counts.append(used)
        return value


def default_epsilon(degree: int, dt, dx) -> float:
    """Δt·Δx^{p+1}: per-step share of a spatial error of size Δx^{p+1}."""
    if dt is None or dx is None:
        raise InvalidArgumentError("Adaptive integrators need dt and dx when epsilon is not given")
    return float(dt) * float(dx) ** (degree + 1)


def _adaptive(spec: IntegratorSpec, sweeper: NodeSweeper, degree: int, dt, dx) -> AdaptiveIntegrator:
    epsilon = spec.epsilon if spec.epsilon is not None else default_epsilon(degree, dt, dx)
    logger.debug(f"Adaptive {sweeper.name}: epsilon={epsilon:.3e}, kmax={spec.kmax}")
    return AdaptiveIntegrator(sweeper, epsilon, spec.kmax)


@register_integrator("adaptive-sdg")
def _build_adaptive_sdg(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> AdaptiveIntegrator:
    sweeper = SDGIntegrator(build_sdg_tableau(degree, dtype=dtype), spec.kmax)
    return _adaptive(spec, sweeper, degree, dt, dx)


@register_integrator("adaptive-sdc")
def _build_adaptive_sdc(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> AdaptiveIntegrator:
    sweeper = SDCIntegrator(build_sdc_tableau(degree, spec.variant, dtype), spec.kmax)
    return _adaptive(spec, sweeper, degree, dt, dx)
