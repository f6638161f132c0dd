"""
Machinery shared by the node-based iterative integrators (SDG and SDC).

Both methods place p+1 right Radau nodes t_{n,m} = t_n + (1 + τ_m) Δt/2 in the
step, start from a forward Euler predictor across the nodes and then apply K
correction sweeps; only the sweep formula differs.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from core.utils import InvalidArgumentError, ensure_finite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepState:
    """
    Stage values after a given number of sweeps.

    Attributes:
        iteration: 0 for the predictor, k after k correction sweeps.
        stages: u_{n,m} for m = 0..p.
        rhs: f(t_{n,m}, u_{n,m}); the last entry stays None until a following
            sweep needs it.
    """

    iteration: int
    stages: Tuple[np.ndarray, ...]
    rhs: Tuple[Optional[np.ndarray], ...]

    @property
    def final(self) -> np.ndarray:
        return self.stages[-1]


def node_times(t_n, dt, nodes: np.ndarray) -> List:
    return [t_n + (1 + tau) * dt / 2 for tau in nodes]


def weighted_sum(row: np.ndarray, values: Sequence[np.ndarray]) -> np.ndarray:
    """Σ_j row[j] · values[j]."""
    total = row[0] * values[0]
    for coefficient, value in zip(row[1:], values[1:]):
        total = total + coefficient * value
    return total


def evaluate(rhs: Callable, t, u: np.ndarray, what: str) -> np.ndarray:
    return ensure_finite(rhs(t, u), what)


def euler_predictor(u_n: np.ndarray, t_n, dt, nodes: np.ndarray, rhs: Callable) -> SweepState:
    """Forward Euler from t_n across the nodes; p+1 rhs evaluations."""
    times = node_times(t_n, dt, nodes)
    stages = [u_n + (times[0] - t_n) * evaluate(rhs, t_n, u_n, "predictor")]
    values: List[Optional[np.ndarray]] = []
    for m in range(len(nodes) - 1):
        values.append(evaluate(rhs, times[m], stages[m], "predictor"))
        stages.append(stages[m] + (times[m + 1] - times[m]) * values[m])
    values.append(None)
    return SweepState(0, tuple(stages), tuple(values))


def completed_rhs(state: SweepState, times: Sequence, rhs: Callable) -> List[np.ndarray]:
    """rhs values at every node, evaluating the deferred last one if needed."""
    values = list(state.rhs)
    if values[-1] is None:
        values[-1] = evaluate(rhs, times[-1], state.stages[-1], "sweep")
    return values


class NodeSweeper(ABC):
    """
    Predictor plus K correction sweeps on p+1 nodes.

    K counts correction sweeps after the predictor, so K sweeps give
    temporal order min(2p+1, K+1).
    """

    name: str = "sweeper"

    def __init__(self, nodes: np.ndarray, iterations: int):
        if iterations < 1:
            raise InvalidArgumentError(f"Iteration count K must be >= 1, got {iterations}")
        self.nodes = nodes
        self.iterations = iterations

    @property
    def degree(self) -> int:
        return len(self.nodes) - 1

    @property
    def order(self) -> int:
        return min(2 * self.degree + 1, self.iterations + 1)

    @property
    def evaluations_per_step(self) -> int:
        return (self.degree + 1) * (self.iterations + 1)

    def predict(self, u_n: np.ndarray, t_n, dt, rhs: Callable) -> SweepState:
        return euler_predictor(u_n, t_n, dt, self.nodes, rhs)

    @abstractmethod
    def sweep(self, state: SweepState, u_n: np.ndarray, t_n, dt, rhs: Callable) -> SweepState:
        """One correction sweep producing iteration state.iteration + 1."""

    def step(self, u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray:
        if not dt > 0:
            raise InvalidArgumentError(f"Time step must be positive, got {dt}")
        state = self.predict(u, t, dt, rhs)
        for _ in range(self.iterations):
            state = self.sweep(state, u, t, dt, rhs)
        return state.final
