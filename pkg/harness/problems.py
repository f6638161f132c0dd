"""
Test problems with known exact solutions.

linear    u_t + u_x = 0 on [0, 1], u(x, 0) = sin(2πx)
variable  u_t + ((2 + sin(2π(x+t))) u)_x = g on [0, 1], exact sin(2π(x−t))
burgers   u_t + (u²/2)_x = 0 on [0, 2π], u(x, 0) = sin(x), smooth for t < 1
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np

from core.utils import EvaluationFailure, InvalidArgumentError
from dgspace.flux import FluxSpec, burgers, linear_advection, variable_coefficient
from dgspace.mesh import Mesh
from numerics.precision import DTypeLike, pi_for, resolve_dtype

logger = logging.getLogger(__name__)


class ProblemKind(str, Enum):
    LINEAR = "linear"
    VARIABLE = "variable"
    BURGERS = "burgers"

    @classmethod
    def parse(cls, value: Union[str, "ProblemKind"]) -> "ProblemKind":
        if isinstance(value, ProblemKind):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InvalidArgumentError(
                f"Unknown problem '{value}'. Expected one of: {', '.join(k.value for k in cls)}"
            )


def burgers_exact(x, t, tol: float = 1e-14, max_iterations: int = 50) -> np.ndarray:
    """
    Pre-shock solution of Burgers' equation with u(x, 0) = sin(x).

    Solves the characteristic relation u = sin(x − u t) by Newton iteration
    from the initial guess sin(x), elementwise on arrays.

    Raises:
        InvalidArgumentError: If t is negative or t >= 1 (shock time).
        EvaluationFailure: If some point has not converged after max_iterations.
    """
    if not 0 <= float(t) < 1:
        raise InvalidArgumentError(f"Burgers exact solution is smooth only for 0 <= t < 1, got t={t}")
    points = np.asarray(x)
    if points.dtype.kind != "f":
        points = points.astype(np.float64)
    u = np.sin(points)
    if float(t) == 0:
        return u

    for _ in range(max_iterations):
        phase = points - u * t
        residual = u - np.sin(phase)
        if np.all(np.abs(residual) < tol):
            return u
        u = u - residual / (1 + t * np.cos(phase))

    residual = np.abs(u - np.sin(points - u * t))
    if np.all(residual < tol):
        return u
    raise EvaluationFailure(
        f"Burgers characteristic Newton iteration did not converge at t={t}: "
        f"max residual {float(np.max(residual)):.3e} after {max_iterations} iterations"
    )


@dataclass(frozen=True)
class Problem:
    """
    A periodic test problem.

    Attributes:
        kind: Problem identifier.
        flux: Conservation law and source.
        exact: exact(x, t), vectorized in x.
        final_time: Default final time T.
        cfl: Default CFL number.
        scale_dt_by_wave_speed: Use dt = cfl·Δx/α(u_0) instead of cfl·Δx.
        two_pi_domain: Domain is [0, 2π] instead of [0, 1].
    """

    kind: ProblemKind
    flux: FluxSpec
    exact: Callable
    final_time: float
    cfl: float
    scale_dt_by_wave_speed: bool = False
    two_pi_domain: bool = False

    def mesh(self, cells: int, dtype: DTypeLike = np.float64) -> Mesh:
        resolved = resolve_dtype(dtype)
        zero = resolved.type(0)
        if self.two_pi_domain:
            return Mesh(zero, 2 * pi_for(resolved), cells)
        return Mesh(zero, resolved.type(1), cells)

    def initial(self, x) -> np.ndarray:
        return self.exact(x, 0)

    def exact_at(self, t) -> Callable:
        return lambda x: self.exact(x, t)


def _linear() -> Problem:
    flux = linear_advection(1.0)
    return Problem(ProblemKind.LINEAR, flux, flux.exact, final_time=1.0, cfl=0.1)


def _variable() -> Problem:
    flux = variable_coefficient()
    return Problem(ProblemKind.VARIABLE, flux, flux.exact, final_time=1.0, cfl=0.05)


def _burgers() -> Problem:
    return Problem(
        ProblemKind.BURGERS,
        burgers(burgers_exact),
        burgers_exact,
        final_time=0.5,
        cfl=0.05,
        scale_dt_by_wave_speed=True,
        two_pi_domain=True,
    )


_BUILDERS = {
    ProblemKind.LINEAR: _linear,
    ProblemKind.VARIABLE: _variable,
    ProblemKind.BURGERS: _burgers,
}


def get_problem(kind: Union[str, ProblemKind]) -> Problem:
    return _BUILDERS[ProblemKind.parse(kind)]()
