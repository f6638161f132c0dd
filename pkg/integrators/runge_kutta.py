"""Third-order TVD Runge-Kutta and classical fourth-order Runge-Kutta steps."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from core.utils import InvalidArgumentError, ensure_finite
from integrators.registry import IntegratorSpec, register_integrator

logger = logging.getLogger(__name__)


class RKScheme(str, Enum):
    TVD_RK3 = "rk3"
    CLASSICAL_RK4 = "rk4"


def _check_step(dt) -> None:
    if not dt > 0:
        raise InvalidArgumentError(f"Time step must be positive, got {dt}")


def rk3_step(u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray:
    """
    TVD-RK3 as a convex combination of forward Euler steps.

    Stage times are t, t+dt and t+dt/2.
    """
    _check_step(dt)
    u1 = u + dt * ensure_finite(rhs(t, u), "RK3 stage 1")
    u2 = (3 * u + u1 + dt * ensure_finite(rhs(t + dt, u1), "RK3 stage 2")) / 4
    return (u + 2 * u2 + 2 * dt * ensure_finite(rhs(t + dt / 2, u2), "RK3 stage 3")) / 3


def rk4_step(u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray:
    """Classical RK4 with k1 = L(t_n, u_n)."""
    _check_step(dt)
    half = dt / 2
    k1 = ensure_finite(rhs(t, u), "RK4 stage 1")
    k2 = ensure_finite(rhs(t + half, u + half * k1), "RK4 stage 2")
    k3 = ensure_finite(rhs(t + half, u + half * k2), "RK4 stage 3")
    k4 = ensure_finite(rhs(t + dt, u + dt * k3), "RK4 stage 4")
    return u + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6


@dataclass(frozen=True)
class RKStepper:
    """Explicit Runge-Kutta integrator selected by scheme."""

    scheme: RKScheme

    @property
    def name(self) -> str:
        return self.scheme.value

    @property
    def evaluations_per_step(self) -> int:
        return 3 if self.scheme is RKScheme.TVD_RK3 else 4

    @property
    def order(self) -> int:
        return 3 if self.scheme is RKScheme.TVD_RK3 else 4

    def step(self, u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray:
        if self.scheme is RKScheme.TVD_RK3:
            return rk3_step(u, t, dt, rhs)
        return rk4_step(u, t, dt, rhs)

    def stability_function(self, z):
        """R(z) for y' = λy; both schemes reproduce the Taylor polynomial of e^z."""
        terms = [1, z, z**2 / 2, z**3 / 6]
        if self.scheme is RKScheme.CLASSICAL_RK4:
            terms.append(z**4 / 24)
        return sum(terms)


@register_integrator("rk3")
def _build_rk3(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> RKStepper:
    return RKStepper(RKScheme.TVD_RK3)


@register_integrator("rk4")
def _build_rk4(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> RKStepper:
    return RKStepper(RKScheme.CLASSICAL_RK4)
