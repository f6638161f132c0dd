"""
Working precision for every numerical table in the solver.

Tables (quadrature nodes, Lagrange matrices, SDG/SDC tableaus, SIAC kernel
coefficients) are constructed in mpmath at MP_DIGITS digits and only then cast
to the working scalar type. The cast goes through a hi+lo split so that the
extended-precision value is correctly rounded instead of inheriting a float64
rounding error.
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Iterable, Union

import mpmath
import numpy as np

logger = logging.getLogger(__name__)

MP_DIGITS = 40

DTypeLike = Union[np.dtype, type, str, "Precision"]


class Precision(str, Enum):
    """Scalar type used by a run."""

    STANDARD = "standard"
    EXTENDED = "extended"

    @property
    def dtype(self) -> np.dtype:
        if self is Precision.STANDARD:
            return np.dtype(np.float64)
        return np.dtype(np.longdouble)

    @classmethod
    def parse(cls, value: Union[str, "Precision"]) -> "Precision":
        if isinstance(value, Precision):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            from core.utils import InvalidArgumentError

            raise InvalidArgumentError(
                f"Unknown precision '{value}'. Expected one of: {', '.join(p.value for p in cls)}"
            )


def resolve_dtype(dtype: DTypeLike = np.float64) -> np.dtype:
    """Normalize a dtype or Precision into a numpy floating dtype."""
    if isinstance(dtype, Precision):
        return dtype.dtype
    resolved = np.dtype(dtype)
    if resolved == np.dtype(object):
        return resolved
    if resolved.kind != "f":
        from core.utils import InvalidArgumentError

        raise InvalidArgumentError(f"Working precision must be a floating type, got {resolved}")
    return resolved


def from_mp(values: Iterable, dtype: DTypeLike = np.float64) -> np.ndarray:
    """
    Cast mpmath numbers (any nesting of lists) to a numpy array of the given dtype.

    object dtype keeps the mpf values untouched.
    """
    resolved = resolve_dtype(dtype)
    data = np.array(values, dtype=object)
    if resolved == np.dtype(object):
        return data
    flat = data.reshape(-1)
    hi = np.array([float(v) for v in flat], dtype=np.float64)
    if resolved.itemsize <= 8:
        return hi.reshape(data.shape).astype(resolved)
    with mpmath.workdps(MP_DIGITS):
        lo = np.array([float(v - h) for v, h in zip(flat, hi.tolist())], dtype=np.float64)
    return (hi.astype(resolved) + lo.astype(resolved)).reshape(data.shape)


@lru_cache(maxsize=None)
def pi_for(dtype: DTypeLike = np.float64):
    """π correctly rounded to the given floating type."""
    resolved = resolve_dtype(dtype)
    with mpmath.workdps(MP_DIGITS):
        return from_mp([+mpmath.pi], resolved)[0]
