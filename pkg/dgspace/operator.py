"""
Semi-discrete DG operator L_h for u_t + f(u)_x = g on a periodic mesh.

For element j with Δx = h the modal rates are

    dc_k/dt = (2/h) [ Σ_q w_q f(u_q) φ_k'(ξ_q) − f̂_{j+1/2} φ_k(1) + f̂_{j-1/2} φ_k(−1) ]
              + Σ_q w_q g(x_q, t) φ_k(ξ_q)

with a global Lax-Friedrichs flux whose α is the maximal wave speed of the
state being evaluated.
"""

import logging
from typing import Optional

import numpy as np

from dgspace.flux import FluxSpec, lax_friedrichs
from dgspace.mesh import Mesh
from dgspace.solution import DGSolution
from numerics.modal import legendre_derivatives, legendre_values
from numerics.precision import resolve_dtype
from numerics.quadrature import gauss_legendre_rule

logger = logging.getLogger(__name__)


class SemiDiscreteOperator:
    """
    Callable rhs(t, coeffs) -> rates with precomputed quadrature tables.

    The evaluations counter records every call and is the exact cost measure
    reported by the studies.
    """

    def __init__(self, mesh: Mesh, degree: int, flux: FluxSpec, dtype=np.float64):
        self.mesh = mesh
        self.degree = degree
        self.flux = flux
        self.dtype = resolve_dtype(dtype)
        self.evaluations = 0

        rule = gauss_legendre_rule(degree + 2, self.dtype)
        self._weights = rule.weights
        self._values = legendre_values(rule.nodes, degree)
        self._weighted_slopes = rule.weights[:, None] * legendre_derivatives(rule.nodes, degree)
        self._weighted_values = rule.weights[:, None] * self._values
        ends = legendre_values(np.array([-1, 1], dtype=self.dtype), degree)
        self._left_end, self._right_end = ends[0], ends[1]

        self._points = mesh.physical_points(rule.nodes, self.dtype)
        # x_{j+1/2} for j = 0..N-1: the right interface of every element
        self._right_interfaces = mesh.interfaces(self.dtype)[1:]
        self._scale = 2 / mesh.spacing(self.dtype)

    def reset_counter(self) -> None:
        self.evaluations = 0

    def wave_speed(self, coeffs: np.ndarray, t) -> float:
        """max |f'(u)| over quadrature points and both element traces."""
        flux = self.flux
        interior = coeffs @ self._values.T
        right = coeffs @ self._right_end
        left = coeffs @ self._left_end
        left_points = self._right_interfaces - self.mesh.spacing(self.dtype)
        return max(
            np.max(np.abs(flux.dfdu(interior, self._points, t))),
            np.max(np.abs(flux.dfdu(right, self._right_interfaces, t))),
            np.max(np.abs(flux.dfdu(left, left_points, t))),
        )

    def __call__(self, t, coeffs: np.ndarray) -> np.ndarray:
        self.evaluations += 1
        flux = self.flux

        interior = coeffs @ self._values.T
        volume = flux.f(interior, self._points, t) @ self._weighted_slopes

        # u⁻ at x_{j+1/2} is element j's right trace, u⁺ is element j+1's left trace
        u_minus = coeffs @ self._right_end
        u_plus = np.roll(coeffs @ self._left_end, -1)
        x_face = self._right_interfaces
        alpha = max(
            np.max(np.abs(flux.dfdu(interior, self._points, t))),
            np.max(np.abs(flux.dfdu(u_minus, x_face, t))),
            np.max(np.abs(flux.dfdu(u_plus, x_face, t))),
        )
        f_hat_right = lax_friedrichs(u_minus, u_plus, flux, alpha, x_face, t)
        f_hat_left = np.roll(f_hat_right, 1)

        rates = self._scale * (
            volume - f_hat_right[:, None] * self._right_end[None, :] + f_hat_left[:, None] * self._left_end[None, :]
        )
        if flux.source is not None:
            rates = rates + flux.source(self._points, t) @ self._weighted_values
        return rates


def max_wave_speed(sol: DGSolution, flux: FluxSpec, t: Optional[float] = None) -> float:
    """α = max |f'(u_h)| over quadrature points and traces."""
    operator = SemiDiscreteOperator(sol.mesh, sol.degree, flux, sol.dtype)
    return operator.wave_speed(sol.coeffs, sol.time if t is None else t)


def semidiscrete_rhs(sol: DGSolution, t, flux: FluxSpec) -> np.ndarray:
    """L_h(t, u_h) as an (N, p+1) rate array."""
    return SemiDiscreteOperator(sol.mesh, sol.degree, flux, sol.dtype)(t, sol.coeffs)
