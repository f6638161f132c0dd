"""
Lagrange interpolation on an arbitrary node set.

Written with plain array arithmetic so the same code serves float64,
long double and object arrays of mpmath numbers (used when tableaus are
built at high precision).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.utils import InvalidArgumentError


@dataclass(frozen=True)
class LagrangeBasis:
    """Cardinal polynomials ℓ_j with ℓ_j(τ_i) = δ_ij on the given nodes."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        if nodes.ndim != 1 or nodes.size == 0:
            raise InvalidArgumentError("Lagrange nodes must be a non-empty 1D array")
        if len(set(nodes.tolist())) != nodes.size:
            raise InvalidArgumentError(f"Lagrange nodes must be distinct, got {nodes.tolist()}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def degree(self) -> int:
        return self.nodes.size - 1

    def denominators(self) -> np.ndarray:
        """∏_{k≠j} (τ_j - τ_k) for every j."""
        diffs = self.nodes[:, None] - self.nodes[None, :]
        return np.array(
            [np.prod(np.delete(diffs[j], j)) for j in range(self.nodes.size)],
            dtype=self.nodes.dtype,
        )

    def __call__(self, points) -> np.ndarray:
        values, _ = lagrange_matrices(self, points)
        return values


def lagrange_matrices(basis: LagrangeBasis, points) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values and first derivatives of every cardinal polynomial at points.

    Returns:
        (V, D) with V[i, j] = ℓ_j(x_i) and D[i, j] = ℓ_j'(x_i).
    """
    nodes = basis.nodes
    x = np.atleast_1d(np.asarray(points, dtype=nodes.dtype))
    count = nodes.size
    offsets = x[:, None] - nodes[None, :]
    denominators = basis.denominators()

    values = np.empty((x.size, count), dtype=nodes.dtype)
    derivatives = np.empty((x.size, count), dtype=nodes.dtype)
    for j in range(count):
        others = [k for k in range(count) if k != j]
        values[:, j] = np.prod(offsets[:, others], axis=1) / denominators[j]
        slope = offsets[:, j] * 0
        for skip in others:
            kept = [k for k in others if k != skip]
            slope = slope + np.prod(offsets[:, kept], axis=1)
        derivatives[:, j] = slope / denominators[j]
    return values, derivatives
