"""
Explicit spectral deferred correction (SDC) on right Radau nodes.

Sweep k → k+1 with Δt_{n,m} = t_{n,m+1} − t_{n,m}:

    u_{m+1}^{k+1} = u_m^{k+1} + Δt_{n,m} (f_m^{k+1} − f_m^k) + (Δt/2) Σ_j S_{m+1,j} f_j^k

where S_{m+1,j} = ∫_{τ_m}^{τ_{m+1}} ℓ_j. Node 0 lies strictly inside the step;
the CORRECTED variant integrates the interpolant over [-1, τ_0] for it, the
LITERAL variant pins it to u_n.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from core.utils import InvalidArgumentError
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


class SDCVariant(str, Enum):
    CORRECTED = "corrected"
    LITERAL = "literal"


@dataclass(frozen=True)
class SDCTableau:
    """
    Constant tables of ExSDC_p on the reference step.

    Attributes:
        nodes: Right Radau nodes τ_0 < ... < τ_p = 1.
        gaps: τ_{m+1} − τ_m for m = 0..p-1.
        S: Row 0 integrates ℓ_j over [-1, τ_0]; row m+1 over [τ_m, τ_{m+1}].
        variant: Node-0 update rule.
    """

    degree: int
    nodes: np.ndarray
    gaps: np.ndarray
    S: np.ndarray
    variant: SDCVariant = SDCVariant.CORRECTED


@lru_cache(maxsize=None)
def _sdc_tables_mp(degree: int):
    with mpmath.workdps(MP_DIGITS):
        nodes = gauss_radau_right_rule(degree + 1, object).nodes
        basis = LagrangeBasis(nodes)
        gauss = gauss_legendre_rule(degree + 1, object)
        edges = [mpmath.mpf(-1)] + list(nodes)
        rows = []
        for left, right in zip(edges[:-1], edges[1:]):
            points, weights = gauss.mapped(left, right)
            values, _ = lagrange_matrices(basis, points)
            rows.append(list(weights @ values))
        gaps = [nodes[m + 1] - nodes[m] for m in range(degree)]
        return tuple(nodes), tuple(gaps), rows


def build_sdc_tableau(
    degree: int,
    variant: SDCVariant = SDCVariant.CORRECTED,
    dtype: DTypeLike = np.float64,
) -> SDCTableau:
    """Build ExSDC_p tables at high precision and cast them to dtype."""
    if degree < 1:
        raise InvalidArgumentError(f"SDC degree must be >= 1, got {degree}")
    try:
        variant = SDCVariant(variant)
    except ValueError:
        raise InvalidArgumentError(f"Unknown SDC variant '{variant}'. Expected 'corrected' or 'literal'")
    resolved = resolve_dtype(dtype)
    nodes, gaps, rows = _sdc_tables_mp(degree)
    logger.debug(f"SDC tableau p={degree} ({variant.value})")
    return SDCTableau(
        degree=degree,
        nodes=from_mp(nodes, resolved),
        gaps=from_mp(gaps, resolved).reshape(degree),
        S=from_mp(rows, resolved),
        variant=variant,
    )


def sdc_sweep(state: SweepState, u_n: np.ndarray, t_n, dt, rhs: Callable, tab: SDCTableau) -> SweepState:
    """One explicit SDC correction sweep."""
    times = node_times(t_n, dt, tab.nodes)
    previous = completed_rhs(state, times, rhs)
    half = dt / 2

    if tab.variant is SDCVariant.LITERAL:
        start = u_n
    else:
        start = u_n + half * weighted_sum(tab.S[0], previous)
    stages = [start]
    values = []
    for m in range(tab.degree):
        values.append(evaluate(rhs, times[m], stages[m], "SDC sweep"))
        stages.append(
            stages[m]
            + half * tab.gaps[m] * (values[m] - previous[m])
            + half * weighted_sum(tab.S[m + 1], previous)
        )
    values.append(None)
    return SweepState(state.iteration + 1, tuple(stages), tuple(values))


class SDCIntegrator(NodeSweeper):
    """ExSDC_p^K: Euler predictor followed by K SDC sweeps."""

    name = "sdc"

    def __init__(self, tableau: SDCTableau, iterations: int):
        super().__init__(tableau.nodes, iterations)
        self.tableau = tableau

    def sweep(self, state: SweepState, u_n: np.ndarray, t_n, dt, rhs: Callable) -> SweepState:
        return sdc_sweep(state, u_n, t_n, dt, rhs, self.tableau)


def sdc_step(u_n: np.ndarray, t_n, dt, iterations: int, rhs: Callable, tab: SDCTableau) -> np.ndarray:
    """u_{n+1} = u_{n,p}^K after the predictor and K sweeps."""
    return SDCIntegrator(tab, iterations).step(u_n, t_n, dt, rhs)


@register_integrator("sdc")
def _build_sdc(spec: IntegratorSpec, degree: int, dtype, dt, dx) -> SDCIntegrator:
    return SDCIntegrator(build_sdc_tableau(degree, spec.variant, dtype), spec.iterations)
