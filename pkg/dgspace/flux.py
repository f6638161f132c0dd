"""
Physical flux descriptions and the Lax-Friedrichs numerical flux.

Every callable takes numpy arrays and broadcasts: flux(u, x, t),
wave_speed(u, x, t) = f'(u) at x, source(x, t), exact(x, t).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from numerics.precision import pi_for


class FluxKind(str, Enum):
    LINEAR_ADVECTION = "linear"
    VARIABLE_COEFFICIENT = "variable"
    BURGERS = "burgers"


@dataclass(frozen=True)
class FluxSpec:
    """A scalar conservation law u_t + f(u, x, t)_x = g(x, t)."""

    kind: FluxKind
    flux: Callable
    wave_speed: Callable
    source: Optional[Callable] = None
    exact: Optional[Callable] = None

    def f(self, u, x, t):
        return self.flux(u, x, t)

    def dfdu(self, u, x, t):
        return self.wave_speed(u, x, t)


def _two_pi(x):
    dtype = np.asarray(x).dtype
    return 2 * pi_for(dtype if dtype.kind == "f" else np.float64)


def lax_friedrichs(u_minus, u_plus, flux: FluxSpec, alpha, x, t):
    """½(f(u⁻) + f(u⁺) − α(u⁺ − u⁻)) at interface points x; consistent and monotone for α ≥ max|f'|."""
    return (flux.f(u_minus, x, t) + flux.f(u_plus, x, t) - alpha * (u_plus - u_minus)) / 2


def linear_advection(speed: float = 1.0) -> FluxSpec:
    """u_t + c u_x = 0 with exact solution sin(2π(x − c t))."""

    def exact(x, t):
        return np.sin(_two_pi(x) * (x - speed * t))

    return FluxSpec(
        kind=FluxKind.LINEAR_ADVECTION,
        flux=lambda u, x, t: speed * u,
        wave_speed=lambda u, x, t: speed + 0 * u,
        exact=exact,
    )


def variable_coefficient() -> FluxSpec:
    """
    u_t + (a(x,t) u)_x = g with a = 2 + sin(2π(x+t)).

    g is manufactured so that sin(2π(x−t)) solves the equation:
    g = 2π cos(2π(x+t)) sin(2π(x−t)) + 2π (1 + sin(2π(x+t))) cos(2π(x−t)).
    """
    def coefficient(x, t):
        return 2 + np.sin(_two_pi(x) * (x + t))

    def source(x, t):
        two_pi = _two_pi(x)
        plus, minus = two_pi * (x + t), two_pi * (x - t)
        return two_pi * np.cos(plus) * np.sin(minus) + two_pi * (1 + np.sin(plus)) * np.cos(minus)

    return FluxSpec(
        kind=FluxKind.VARIABLE_COEFFICIENT,
        flux=lambda u, x, t: coefficient(x, t) * u,
        wave_speed=lambda u, x, t: coefficient(x, t) + 0 * u,
        source=source,
        exact=lambda x, t: np.sin(_two_pi(x) * (x - t)),
    )


def burgers(exact: Optional[Callable] = None) -> FluxSpec:
    """u_t + (u²/2)_x = 0."""
    return FluxSpec(
        kind=FluxKind.BURGERS,
        flux=lambda u, x, t: u * u / 2,
        wave_speed=lambda u, x, t: u,
        exact=exact,
    )
