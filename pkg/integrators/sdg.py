"""
Explicit spectral discontinuous Galerkin (SDG) time stepping.

DG in time with p+1 right Radau nodes gives, on the reference step [-1, 1],

    L U + (Δt/2) diag(ω) F(U) + u_n b = 0,
    L_ij = ∫ ℓ_i' ℓ_j − δ_ip δ_jp,   b_i = ℓ_i(-1),

whose solution is the Radau IIA collocation update. The explicit method
preconditions this system with the bidiagonal L_Δ (−1 on the diagonal, 1
below) and sweeps node by node using L̃ = L_Δ L⁻¹:

    u_0^{k+1}   = u_n + (Δt/2) Σ_j L̃_0j ω_j f_j^k
    u_m+1^{k+1} = u_m^{k+1} + (Δt/2) ω_m (f_m^{k+1} − f_m^k) + (Δt/2) Σ_j L̃_m+1,j ω_j f_j^k
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Tuple

import mpmath
import numpy as np

from core.utils import ConstructionFailure, InvalidArgumentError, SolverFailure
from integrators.registry import IntegratorSpec, register_integrator
from integrators.sweeps import (
    NodeSweeper,
    SweepState,
    completed_rhs,
    evaluate,
    node_times,
    weighted_sum,
)
from numerics.lagrange import LagrangeBasis, lagrange_matrices
from numerics.precision import MP_DIGITS, DTypeLike, from_mp, resolve_dtype
from numerics.quadrature import gauss_legendre_rule, gauss_radau_right_rule

logger = logging.getLogger(__name__)


class NodeFamily(str, Enum):
    RADAU_RIGHT = "radau-right"
    # Equispaced right-aligned nodes; only used to show that the node choice matters.
    UNIFORM = "uniform"


@dataclass(frozen=True)
class SDGTableau:
    """
    Constant tables of ExSDG_p on the reference step.

    Attributes:
        nodes: τ_0 < ... < τ_p = 1.
        weights: Quadrature weights ω attached to the nodes.
        L: DG-in-time matrix.
        L_tilde: L_Δ L⁻¹.
        correction: L̃ with column j scaled by ω_j.
        left_values: ℓ_j(-1).
        condition_number: 1-norm condition number of L.
    """

    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    L: np.ndarray
    L_tilde: np.ndarray
    correction: np.ndarray
    left_values: np.ndarray
    condition_number: float
    family: NodeFamily = NodeFamily.RADAU_RIGHT


def _node_family_mp(degree: int, family: NodeFamily):
    if family is NodeFamily.RADAU_RIGHT:
        rule = gauss_radau_right_rule(degree + 1, object)
        return rule.nodes, rule.weights
    nodes = np.array([mpmath.mpf(-1) + mpmath.mpf(2 * (m + 1)) / (degree + 1) for m in range(degree + 1)], dtype=object)
    gauss = gauss_legendre_rule(degree + 2, object)
    values, _ = lagrange_matrices(LagrangeBasis(nodes), gauss.nodes)
    return nodes, gauss.weights @ values


@lru_cache(maxsize=None)
def _sdg_tables_mp(degree: int, family: NodeFamily):
    with mpmath.workdps(MP_DIGITS):
        nodes, weights = _node_family_mp(degree, family)
        basis = LagrangeBasis(nodes)
        # ∫ ℓ_i' ℓ_j has degree 2p-1; p+1 Gauss points are exact.
        gauss = gauss_legendre_rule(degree + 1, object)
        values, slopes = lagrange_matrices(basis, gauss.nodes)
        L = slopes.T @ (gauss.weights[:, None] * values)
        L[degree, degree] -= 1

        L_mp = mpmath.matrix(L.tolist())
        try:
            L_inv = L_mp**-1
        except ZeroDivisionError as e:
            raise ConstructionFailure(f"DG-in-time matrix L is singular for p={degree}") from e
        condition = mpmath.mnorm(L_mp, 1) * mpmath.mnorm(L_inv, 1)

        size = degree + 1
        L_delta = mpmath.zeros(size, size)
        for i in range(size):
            L_delta[i, i] = -1
            if i > 0:
                L_delta[i, i - 1] = 1
        L_tilde = L_delta * L_inv
        L_tilde_rows = [[L_tilde[i, j] for j in range(size)] for i in range(size)]
        correction = [[L_tilde[i, j] * weights[j] for j in range(size)] for i in range(size)]
        left, _ = lagrange_matrices(basis, np.array([mpmath.mpf(-1)], dtype=object))

        return (
            tuple(nodes),
            tuple(weights),
            L.tolist(),
            L_tilde_rows,
            correction,
            tuple(left[0]),
            float(condition),
        )


def build_sdg_tableau(degree: int, family: NodeFamily = NodeFamily.RADAU_RIGHT, dtype: DTypeLike = np.float64) -> SDGTableau:
    """Build ExSDG_p tables at high precision and cast them to dtype."""
    if degree < 1:
        raise InvalidArgumentError(f"SDG degree must be >= 1, got {degree}")
    family = NodeFamily(family)
    resolved = resolve_dtype(dtype)
    nodes, weights, L, L_tilde, correction, left, condition = _sdg_tables_mp(degree, family)
    logger.debug(f"SDG tableau p={degree} ({family.value}): cond_1(L) = {condition:.3e}")
    return SDGTableau(
        degree=degree,
        nodes=from_mp(nodes, resolved),
        weights=from_mp(weights, resolved),
        L=from_mp(L, resolved),
        L_tilde=from_mp(L_tilde, resolved),
        correction=from_mp(correction, resolved),
        left_values=from_mp(left, resolved),
        condition_number=condition,
        family=family,
    )


def sdg_predictor(u_n: np.ndarray, t_n, dt, rhs: Callable, tab: SDGTableau) -> SweepState:
    """Forward Euler initial approximation at the nodes (iteration 0)."""
    return SDGIntegrator(tab, 1).predict(u_n, t_n, dt, rhs)


def sdg_sweep(state: SweepState, u_n: np.ndarray, t_n, dt, rhs: Callable, tab: SDGTableau) -> SweepState:
    """One explicit SDG correction sweep."""
    times = node_times(t_n, dt, tab.nodes)
    previous = completed_rhs(state, times, rhs)
    half = dt / 2

    stages = [u_n + half * weighted_sum(tab.correction[0], previous)]
    values = []
    for m in range(tab.degree):
        values.append(evaluate(rhs, times[m], stages[m], "SDG sweep"))
        stages.append(
            stages[m]
            + half * tab.weights[m] * (values[m] - previous[m])
            + half * weighted_sum(tab.correction[m + 1], previous)
        )
    values.append(None)
    return SweepState(state.iteration + 1, tuple(stages), tuple(values))


class SDGIntegrator(NodeSweeper):
    """ExSDG_p^K: Euler predictor followed by K SDG sweeps."""

    name = "sdg"

    def __init__(self, tableau: SDGTableau, iterations: int):
        super().__init__(tableau.nodes, iterations)
        self.tableau = tableau

    def sweep(self, state: SweepState, u_n: np.ndarray, t_n, dt, rhs: Callable) -> SweepState:
        return sdg_sweep(state, u_n, t_n, dt, rhs, self.tableau)


def sdg_step(u_n: np.ndarray, t_n, dt, iterations: int, rhs: Callable, tab: SDGTableau) -> np.ndarray:
    """u_{n+1} = u_{n,p}^K after the predictor and K sweeps."""
    return SDGIntegrator(tab, iterations).step(u_n, t_n, dt, rhs)


def dg_collocation_solve(u_n, t_n, dt, lam, tab: SDGTableau) -> Tuple:
    """
    Exact DG-in-time stage values for the scalar test equation u' = λu.

    Solves (L + (Δt/2) λ diag(ω)) U = −u_n b at high precision; this is the
    fixed point every SDG sweep converges to.
    """
    _, weights, L, _, _, left, _ = _sdg_tables_mp(tab.degree, tab.family)
    with mpmath.workdps(MP_DIGITS):
        size = tab.degree + 1
        scale = mpmath.mpf(dt) / 2 * mpmath.mpf(lam)
        system = mpmath.matrix(L)
        right = mpmath.matrix(size, 1)
        for i in range(size):
            system[i, i] += scale * weights[i]
            right[i] = -mpmath.mpf(u_n) * left[i]
        try:
            solution = mpmath.lu_solve(system, right)
        except ZeroDivisionError as e:
            raise SolverFailure(f"Collocation system is singular for dt*lambda = {float(dt) * float(lam)}") from e
        return tuple(from_mp([solution[i] for i in range(size)], tab.nodes.dtype))


@register_integrator("sdg")
def _build_sdg(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> SDGIntegrator:
    return SDGIntegrator(build_sdg_tableau(degree, dtype=dtype), spec.iterations)
