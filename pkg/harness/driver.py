"""
Time-stepping driver: fixed-CFL stepping of a DG solution to a final time.

The step is dt = cfl·Δx (or cfl·Δx/α(u_0) for problems whose wave speed
depends on the solution). Steps are uniform except the last one, which is
shrunk to land exactly on T. Every rhs evaluation goes through one
SemiDiscreteOperator, whose counter gives the exact cost of the run.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from core.utils import (
    BudgetExceeded,
    IntegrationFailure,
    InvalidArgumentError,
    ensure_finite,
    handle_numeric_errors,
)
from dgspace.flux import FluxSpec
from dgspace.operator import SemiDiscreteOperator
from dgspace.solution import DGSolution
from integrators.registry import TimeIntegrator

logger = logging.getLogger(__name__)

# Slack when dividing the time span by dt, so T = n·dt up to rounding gives n steps.
_STEP_COUNT_SLACK = 1e-9


@dataclass
class IntegrationResult:
    """
    Outcome of a driver run.

    Attributes:
        solution: DG solution at the final time.
        steps: Number of time steps taken.
        rhs_evaluations: Calls of the semi-discrete operator.
        seconds: Wall-clock time spent stepping.
        iteration_counts: Per-step sweep counts of adaptive integrators.
    """

    solution: DGSolution
    steps: int
    rhs_evaluations: int
    seconds: float
    iteration_counts: List[int] = field(default_factory=list)


def time_step(sol: DGSolution, cfl: float, flux: FluxSpec, scale_by_wave_speed: bool = False):
    """dt = cfl·Δx, divided by the maximal wave speed of sol when requested."""
    if not cfl > 0:
        raise InvalidArgumentError(f"CFL number must be positive, got {cfl}")
    dt = sol.dtype.type(cfl) * sol.mesh.spacing(sol.dtype)
    if scale_by_wave_speed:
        operator = SemiDiscreteOperator(sol.mesh, sol.degree, flux, sol.dtype)
        alpha = operator.wave_speed(sol.coeffs, sol.dtype.type(sol.time))
        if not alpha > 0:
            raise InvalidArgumentError("Cannot scale the time step by a zero wave speed")
        dt = dt / alpha
    return dt


def step_count(span, dt) -> int:
    """⌈span/dt⌉, ignoring a rounding-level excess."""
    return int(np.ceil(float(span / dt) - _STEP_COUNT_SLACK))


@handle_numeric_errors("integrate")
def run_integration(
    sol0: DGSolution,
    final_time,
    cfl: float,
    integrator: TimeIntegrator,
    flux: FluxSpec,
    *,
    scale_by_wave_speed: bool = False,
    budget_seconds: Optional[float] = None,
) -> IntegrationResult:
    """
    Step sol0 to final_time with the given integrator.

    Args:
        sol0: Initial DG solution; its time is the start time.
        final_time: Target time T >= sol0.time.
        cfl: CFL number.
        integrator: Any TimeIntegrator (see integrators.registry).
        flux: Conservation law being solved.
        scale_by_wave_speed: Divide dt by α(u_0).
        budget_seconds: Wall-clock cap; BudgetExceeded is raised when it is hit.

    Raises:
        IntegrationFailure: A step produced NaN or Inf; carries the step index.
        BudgetExceeded: The wall-clock budget ran out before T.
    """
    dtype = sol0.dtype
    start_time = dtype.type(sol0.time)
    end_time = dtype.type(final_time)
    if end_time < start_time:
        raise InvalidArgumentError(f"Final time {final_time} is before the start time {sol0.time}")
    if end_time == start_time:
        return IntegrationResult(sol0, 0, 0, 0.0)

    dt = time_step(sol0, cfl, flux, scale_by_wave_speed)
    steps = step_count(end_time - start_time, dt)
    operator = SemiDiscreteOperator(sol0.mesh, sol0.degree, flux, dtype)
    if hasattr(integrator, "reset"):
        integrator.reset()
    logger.debug(
        f"Stepping {integrator.name} from t={float(start_time)} to T={float(end_time)}: "
        f"dt={float(dt):.4e}, {steps} steps"
    )

    u = sol0.coeffs
    started = time.perf_counter()
    for n in range(steps):
        t = start_time + n * dt
        h = dt if n < steps - 1 else end_time - t
        try:
            with np.errstate(over="raise", invalid="raise"):
                u = ensure_finite(integrator.step(u, t, h, operator), integrator.name)
        except FloatingPointError as e:
            raise IntegrationFailure(f"Floating point error in {integrator.name}: {e}", step=n) from e
        except IntegrationFailure as e:
            if e.step is not None:
                raise
            raise IntegrationFailure(str(e), step=n) from e

        elapsed = time.perf_counter() - started
        if budget_seconds is not None and elapsed > budget_seconds and n + 1 < steps:
            logger.warning(f"{integrator.name} stopped after {n + 1}/{steps} steps: budget of {budget_seconds}s used up")
            raise BudgetExceeded(n + 1, steps, elapsed)

    seconds = time.perf_counter() - started
    counts = list(getattr(integrator, "iteration_counts", []))
    return IntegrationResult(sol0.with_coeffs(u, end_time), steps, operator.evaluations, seconds, counts)


def integrate(
    sol0: DGSolution,
    final_time,
    cfl: float,
    integrator: TimeIntegrator,
    flux: FluxSpec,
    *,
    scale_by_wave_speed: bool = False,
) -> DGSolution:
    """DG solution at final_time; see run_integration."""
    result = run_integration(sol0, final_time, cfl, integrator, flux, scale_by_wave_speed=scale_by_wave_speed)
    return result.solution
