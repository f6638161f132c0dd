"""Time integrators for the semi-discrete DG system."""

from integrators.registry import (
    IntegratorSpec,
    TimeIntegrator,
    build_integrator,
    get_integrator_names,
    register_integrator,
)

# Imported for their register_integrator side effects.
from integrators import runge_kutta, sdg, sdc, adaptive  # noqa: E402,F401

__all__ = [
    "IntegratorSpec",
    "TimeIntegrator",
    "build_integrator",
    "get_integrator_names",
    "register_integrator",
]
