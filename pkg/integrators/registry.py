"""
Integrator Registry

Time integrators register a factory under a short name ('rk3', 'sdg', ...)
with the register_integrator decorator; runs then build them by name from an
IntegratorSpec. Registration happens when the integrators package is imported.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Mapping, Optional, Protocol

import numpy as np

from core.utils import InvalidArgumentError

logger = logging.getLogger(__name__)


class TimeIntegrator(Protocol):
    """One-step method u_{n+1} = step(u_n, t_n, dt, rhs) with rhs(t, u)."""

    name: str

    def step(self, u: np.ndarray, t, dt, rhs: Callable) -> np.ndarray: ...


@dataclass(frozen=True)
class IntegratorSpec:
    """
    Name and parameters of a time integrator.

    Attributes:
        kind: Registered name (rk3, rk4, sdg, sdc, adaptive-sdg, adaptive-sdc).
        iterations: Correction sweeps K for sdg/sdc; defaults to 2p.
        variant: Node-0 handling for SDC ('corrected' or 'literal').
        epsilon: Stopping tolerance for adaptive variants; defaults to Δt·Δx^{p+1}.
        kmax: Sweep cap for adaptive variants; defaults to 2p.
    """

    kind: str
    iterations: Optional[int] = None
    variant: str = "corrected"
    epsilon: Optional[float] = None
    kmax: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind.strip().lower())
        object.__setattr__(self, "variant", self.variant.strip().lower())

    @property
    def label(self) -> str:
        if self.kind in ("sdg", "sdc") and self.iterations is not None:
            return f"{self.kind}(K={self.iterations})"
        return self.kind

    def with_defaults(self, degree: int) -> "IntegratorSpec":
        """Fill iteration counts that default to 2p."""
        updates = {}
        if self.kind in ("sdg", "sdc") and self.iterations is None:
            updates["iterations"] = 2 * degree
        if self.kind.startswith("adaptive") and self.kmax is None:
            updates["kmax"] = 2 * degree
        return replace(self, **updates) if updates else self

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "IntegratorSpec":
        def optional(key, cast):
            raw = values.get(key)
            if raw is None or raw == "":
                return None
            try:
                return cast(raw)
            except (TypeError, ValueError):
                raise InvalidArgumentError(f"Invalid value for '{key}': {raw!r}")

        return cls(
            kind=str(values.get("integrator", "sdg")),
            iterations=optional("iterations", int),
            variant=str(values.get("variant") or "corrected"),
            epsilon=optional("epsilon", float),
            kmax=optional("kmax", int),
        )


IntegratorFactory = Callable[..., TimeIntegrator]

_factories: Dict[str, IntegratorFactory] = {}


def register_integrator(name: str):
    """
    Decorator registering a factory(spec, degree, dtype, dt, dx) -> TimeIntegrator.

    Args:
        name: Name used in IntegratorSpec.kind.
    """

    def decorator(factory: IntegratorFactory) -> IntegratorFactory:
        if name in _factories:
            logger.debug(f"Replacing integrator registration: {name}")
        else:
            logger.debug(f"Registering integrator: {name}")
        _factories[name] = factory
        return factory

    return decorator


def get_integrator_names() -> List[str]:
    return sorted(_factories)


def is_integrator_registered(name: str) -> bool:
    return name in _factories


def build_integrator(spec: IntegratorSpec, degree: int, dtype=np.float64, dt=None, dx=None) -> TimeIntegrator:
    """
    Instantiate the integrator described by spec for DG degree p.

    dt and dx are only needed by adaptive variants without an explicit epsilon.
    """
    if spec.kind not in _factories:
        raise InvalidArgumentError(
            f"Unknown integrator '{spec.kind}'. Registered: {', '.join(get_integrator_names())}"
        )
    return _factories[spec.kind](spec.with_defaults(degree), degree, dtype, dt, dx)
