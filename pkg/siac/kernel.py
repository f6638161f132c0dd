"""
Symmetric SIAC kernel K(x) = Σ_γ c_γ ψ^(p+1)(x − (γ − p)), γ = 0..2p.

The coefficients make K reproduce polynomials of degree ≤ 2p by convolution,
which is equivalent to the moment conditions ∫ K(y) y^m dy = δ_m0 for
m = 0..2p. With μ_i the B-spline moments the system reads

    Σ_γ c_γ Σ_i C(m, i) s_γ^{m−i} μ_i = δ_m0,   s_γ = γ − p.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import mpmath
import numpy as np

from core.utils import ConstructionFailure, InvalidArgumentError
from numerics.precision import MP_DIGITS, DTypeLike, from_mp, resolve_dtype
from siac.bspline import BSpline, bspline_moments

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SIACKernel:
    """
    Kernel for DG degree p in kernel coordinates (scaled by Δx when applied).

    Attributes:
        degree: DG degree p.
        coefficients: c_γ for γ = 0..2p.
        shifts: γ − p.
    """

    degree: int
    coefficients: np.ndarray
    shifts: np.ndarray

    @property
    def spline_order(self) -> int:
        return self.degree + 1

    @property
    def support_half_width(self) -> float:
        return (3 * self.degree + 1) / 2

    @property
    def breakpoints(self) -> np.ndarray:
        """Every point where K may lose smoothness, spaced by one."""
        return np.arange(3 * self.degree + 2) - self.support_half_width

    def __call__(self, x) -> np.ndarray:
        points = np.asarray(x, dtype=self.coefficients.dtype)
        spline = BSpline(self.spline_order)
        total = np.zeros_like(points)
        for coefficient, shift in zip(self.coefficients, self.shifts):
            total = total + coefficient * spline(points - shift)
        return total


@lru_cache(maxsize=None)
def _kernel_coefficients_mp(degree: int):
    size = 2 * degree + 1
    moments = bspline_moments(degree + 1, size)
    with mpmath.workdps(MP_DIGITS):
        system = mpmath.matrix(size, size)
        for m in range(size):
            for gamma in range(size):
                shift = gamma - degree
                system[m, gamma] = sum(comb(m, i) * mpmath.mpf(shift) ** (m - i) * moments[i] for i in range(m + 1))
        right = mpmath.matrix(size, 1)
        right[0] = 1
        try:
            solution = mpmath.lu_solve(system, right)
        except ZeroDivisionError as e:
            raise ConstructionFailure(f"SIAC moment matrix is singular for p={degree}") from e
        return tuple(solution[i] for i in range(size))


def kernel_coefficients(degree: int, dtype: DTypeLike = np.float64) -> np.ndarray:
    """c_γ, γ = 0..2p, solved at high precision then cast."""
    if degree < 1:
        raise InvalidArgumentError(f"SIAC kernels need p >= 1, got {degree}")
    return from_mp(_kernel_coefficients_mp(degree), resolve_dtype(dtype))


@lru_cache(maxsize=None)
def build_kernel(degree: int, dtype: DTypeLike = np.float64) -> SIACKernel:
    resolved = resolve_dtype(dtype)
    coefficients = kernel_coefficients(degree, resolved)
    logger.debug(f"SIAC kernel p={degree}: coefficients {coefficients.tolist()}")
    return SIACKernel(degree, coefficients, np.arange(2 * degree + 1) - degree)
