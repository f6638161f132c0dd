import functools
import logging
import os
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


class DGSiacError(Exception):
    """Base class for every error raised by the solver packages."""

    pass


class InvalidArgumentError(DGSiacError, ValueError):
    """An argument is outside the documented domain of an operation."""

    pass


class ConstructionFailure(DGSiacError, RuntimeError):
    """A numerical table (nodes, tableau, kernel) could not be built."""

    pass


class SolverFailure(DGSiacError, RuntimeError):
    """A linear system was singular or numerically unusable."""

    pass


class EvaluationFailure(DGSiacError, RuntimeError):
    """A pointwise evaluation (e.g. an implicit exact solution) did not converge."""

    pass


class IntegrationFailure(DGSiacError, RuntimeError):
    """Time stepping produced non-finite values."""

    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)


class BudgetExceeded(DGSiacError):
    """A run was stopped because it exceeded its wall-clock budget."""

    def __init__(self, steps_done: int, steps_total: int, elapsed: float):
        self.steps_done = steps_done
        self.steps_total = steps_total
        self.elapsed = elapsed
        super().__init__(
            f"Wall-clock budget exceeded after {steps_done}/{steps_total} steps ({elapsed:.1f}s)"
        )


def ensure_finite(value: np.ndarray, what: str) -> np.ndarray:
    """Raise IntegrationFailure if value holds NaN or Inf."""
    if not np.all(np.isfinite(value)):
        raise IntegrationFailure(f"Non-finite values produced by {what}")
    return value


def ensure_output_directory(output_dir: str) -> None:
    """
    Check that the results directory can be created and written to.

    Args:
        output_dir: Directory that will receive CSV and solution files.

    Raises:
        PermissionError: If the directory cannot be created or written.
    """
    try:
        os.makedirs(output_dir, exist_ok=True)
        marker = os.path.join(output_dir, ".permission_test")
        with open(marker, "w") as f:
            f.write("test")
        os.remove(marker)
        logger.info(f"Output directory check passed: {os.path.abspath(output_dir)}")
    except (PermissionError, OSError) as e:
        raise PermissionError(
            f"Cannot create or write to output directory '{os.path.abspath(output_dir)}': {e}"
        )


def handle_numeric_errors(operation: str):
    """
    Decorator giving numerical operations a uniform failure surface.

    FloatingPointError (raised when numpy runs under errstate(raise)) becomes an
    IntegrationFailure. Library errors are logged once with the operation name
    and re-raised unchanged so callers can branch on their type. Anything else
    is logged with a traceback and re-raised.

    Args:
        operation: Name used in log messages (e.g. 'integrate').
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except FloatingPointError as e:
                logger.error(f"Floating point error in {operation}: {e}")
                raise IntegrationFailure(f"Floating point error in {operation}: {e}") from e
            except BudgetExceeded:
                raise
            except DGSiacError as e:
                logger.error(f"{type(e).__name__} in {operation}: {e}")
                raise
            except Exception as e:
                logger.exception(f"An unexpected error occurred in {operation}: {e}")
                raise

        return wrapper

    return decorator
