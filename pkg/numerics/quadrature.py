"""
Gauss-Legendre and right Gauss-Radau rules on [-1, 1].

Nodes are found by Newton iteration on the Legendre three-term recurrence,
carried out in mpmath and cast to the requested working precision. The
right Radau rule is the reflection of the left rule, whose free nodes are the
roots of P_{n-1} + P_n other than -1.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List, Tuple

import mpmath
import numpy as np

from core.utils import ConstructionFailure, InvalidArgumentError
from numerics.precision import MP_DIGITS, DTypeLike, from_mp, resolve_dtype

logger = logging.getLogger(__name__)

_NEWTON_MAX_ITERATIONS = 100


class RuleKind(str, Enum):
    GAUSS_LEGENDRE = "gauss-legendre"
    GAUSS_RADAU_RIGHT = "gauss-radau-right"


@dataclass(frozen=True)
class QuadratureRule:
    """
    Quadrature nodes and weights on the reference interval [-1, 1].

    Attributes:
        nodes: Strictly increasing abscissae.
        weights: Positive weights summing to 2.
        kind: Which family the rule belongs to.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def exact_degree(self) -> int:
        """Highest polynomial degree integrated exactly."""
        if self.kind is RuleKind.GAUSS_LEGENDRE:
            return 2 * self.size - 1
        return 2 * self.size - 2

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Contract the last axis of values (samples at the nodes) with the weights."""
        return np.asarray(values) @ self.weights

    def mapped(self, a, b) -> Tuple[np.ndarray, np.ndarray]:
        """Physical nodes and weights of the rule transplanted to [a, b]."""
        half = (b - a) / 2
        return a + half * (self.nodes + 1), half * self.weights


def _legendre_pair(n: int, x):
    """P_n(x) and P_{n-1}(x) by the three-term recurrence."""
    p_prev, p_curr = mpmath.mpf(1), x
    if n == 0:
        return p_prev, mpmath.mpf(0)
    for k in range(2, n + 1):
        p_prev, p_curr = p_curr, ((2 * k - 1) * x * p_curr - (k - 1) * p_prev) / k
    return p_curr, p_prev


def _legendre_derivative(n: int, x, p_n, p_nm1):
    return n * (x * p_n - p_nm1) / (x * x - 1)


def _newton(residual_step, guess, label: str):
    tolerance = mpmath.mpf(10) ** (-(MP_DIGITS - 5))
    x = guess
    for _ in range(_NEWTON_MAX_ITERATIONS):
        dx = residual_step(x)
        x -= dx
        if abs(dx) < tolerance:
            return x
    raise ConstructionFailure(f"Newton iteration for {label} nodes did not converge")


@lru_cache(maxsize=None)
def _gauss_legendre_mp(n: int) -> Tuple[Tuple, Tuple]:
    with mpmath.workdps(MP_DIGITS):
        nodes: List = []
        weights: List = []
        for i in range(n):
            guess = -mpmath.cos(mpmath.pi * (i + mpmath.mpf(3) / 4) / (n + mpmath.mpf(1) / 2))

            def step(x):
                p_n, p_nm1 = _legendre_pair(n, x)
                return p_n / _legendre_derivative(n, x, p_n, p_nm1)

            x = _newton(step, guess, f"{n}-point Gauss-Legendre")
            p_n, p_nm1 = _legendre_pair(n, x)
            dp = _legendre_derivative(n, x, p_n, p_nm1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        order = sorted(range(n), key=lambda k: nodes[k])
        return tuple(nodes[k] for k in order), tuple(weights[k] for k in order)


@lru_cache(maxsize=None)
def _gauss_radau_right_mp(n: int) -> Tuple[Tuple, Tuple]:
    with mpmath.workdps(MP_DIGITS):
        if n == 1:
            return (mpmath.mpf(1),), (mpmath.mpf(2),)

        # Left rule first: free nodes are the roots of g = P_{n-1} + P_n with the
        # root at -1 deflated out of the Newton update.
        left_nodes = [mpmath.mpf(-1)]
        left_weights = [mpmath.mpf(2) / (n * n)]
        for i in range(1, n):
            guess = -mpmath.cos(2 * mpmath.pi * i / (2 * n - 1))

            def step(x):
                p_n, p_nm1 = _legendre_pair(n, x)
                _, p_nm2 = _legendre_pair(n - 1, x)
                g = p_nm1 + p_n
                dg = _legendre_derivative(n, x, p_n, p_nm1) + _legendre_derivative(n - 1, x, p_nm1, p_nm2)
                return g / (dg - g / (1 + x))

            x = _newton(step, guess, f"{n}-point Gauss-Radau")
            _, p_nm1 = _legendre_pair(n, x)
            left_nodes.append(x)
            left_weights.append((1 - x) / (n * n * p_nm1 * p_nm1))

        order = sorted(range(n), key=lambda k: left_nodes[k], reverse=True)
        return tuple(-left_nodes[k] for k in order), tuple(left_weights[k] for k in order)


def _check_size(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"A quadrature rule needs at least one point, got n={n}")


def gauss_legendre_rule(n: int, dtype: DTypeLike = np.float64) -> QuadratureRule:
    """n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1."""
    _check_size(n)
    nodes, weights = _gauss_legendre_mp(n)
    resolved = resolve_dtype(dtype)
    return QuadratureRule(from_mp(nodes, resolved), from_mp(weights, resolved), RuleKind.GAUSS_LEGENDRE)


def gauss_radau_right_rule(n: int, dtype: DTypeLike = np.float64) -> QuadratureRule:
    """n-point right Gauss-Radau rule; the last node is +1; exact to degree 2n-2."""
    _check_size(n)
    nodes, weights = _gauss_radau_right_mp(n)
    resolved = resolve_dtype(dtype)
    logger.debug(f"Built {n}-point right Radau rule in {resolved}")
    return QuadratureRule(from_mp(nodes, resolved), from_mp(weights, resolved), RuleKind.GAUSS_RADAU_RIGHT)
