"""
Central B-splines ψ^(ℓ), the building blocks of the SIAC kernel.

ψ^(1) is the indicator of [-1/2, 1/2) and

    ψ^(ℓ+1)(x) = [ ((ℓ+1)/2 + x) ψ^(ℓ)(x + 1/2) + ((ℓ+1)/2 − x) ψ^(ℓ)(x − 1/2) ] / ℓ.

ψ^(ℓ) is a piecewise polynomial of degree ℓ−1 supported on [-ℓ/2, ℓ/2] with
breakpoints at -ℓ/2 + k.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath
import numpy as np

from core.utils import InvalidArgumentError
from numerics.precision import MP_DIGITS
from numerics.quadrature import gauss_legendre_rule


def _check_order(order: int) -> None:
    if order < 1:
        raise InvalidArgumentError(f"B-spline order must be >= 1, got {order}")


def _evaluate(order: int, x: np.ndarray) -> np.ndarray:
    if order == 1:
        inside = (x >= -0.5) & (x < 0.5)
        return np.where(inside, np.ones_like(x), np.zeros_like(x))
    previous = order - 1
    return (
        ((order / 2 + x) * _evaluate(previous, x + 0.5) + (order / 2 - x) * _evaluate(previous, x - 0.5))
        / previous
    )


def bspline_eval(order: int, x) -> np.ndarray:
    """ψ^(order)(x) elementwise; works on float, long double and mpmath object arrays."""
    _check_order(order)
    points = np.asarray(x)
    if points.dtype.kind not in "fO":
        points = points.astype(np.float64)
    return _evaluate(order, points)


def bspline_breakpoints(order: int) -> np.ndarray:
    _check_order(order)
    return np.arange(order + 1) - order / 2


@lru_cache(maxsize=None)
def bspline_moments(order: int, count: int) -> Tuple:
    """
    ∫ ψ^(order)(x) x^i dx for i = 0..count-1 as mpmath numbers.

    Integrated piece by piece between breakpoints with a Gauss rule exact for
    the polynomial integrand.
    """
    _check_order(order)
    with mpmath.workdps(MP_DIGITS):
        rule = gauss_legendre_rule((order + count) // 2 + 1, object)
        moments = [mpmath.mpf(0)] * count
        for k in range(order):
            left = mpmath.mpf(k) - mpmath.mpf(order) / 2
            points, weights = rule.mapped(left, left + 1)
            values = weights * _evaluate(order, points)
            for i in range(count):
                moments[i] += np.sum(values * points**i)
        return tuple(moments)


@dataclass(frozen=True)
class BSpline:
    """Central B-spline ψ^(order) as a callable with its support and knots."""

    order: int

    def __post_init__(self):
        _check_order(self.order)

    @property
    def support(self) -> Tuple[float, float]:
        return -self.order / 2, self.order / 2

    @property
    def breakpoints(self) -> np.ndarray:
        return bspline_breakpoints(self.order)

    def __call__(self, x) -> np.ndarray:
        return bspline_eval(self.order, x)
