"""
Mesh-aligned convolution of a DG solution with the scaled SIAC kernel.

On a uniform mesh with kernel scaling h = Δx, the filtered value at reference
coordinate ξ of element j is

    u*(x) = ∫ K(s) u_h(x − h s) ds = Σ_o Σ_k W[ξ, o, k] c_{j+o, k}

    W[ξ, o, k] = ∫_{ξ/2 − o − 1/2}^{ξ/2 − o + 1/2} K(s) φ_k(ξ − 2o − 2s) ds

Each integral is split at the kernel breakpoints, so every piece is a
polynomial of degree 2p integrated exactly by a (p+2)-point Gauss rule.
Element indices wrap periodically.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

from dgspace.solution import DGSolution
from numerics.modal import legendre_values
from numerics.quadrature import gauss_legendre_rule
from siac.kernel import SIACKernel, build_kernel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PostprocessErrors:
    """L2 error of u* and pointwise samples for plotting."""

    l2: float
    x: np.ndarray
    dg_error: np.ndarray
    filtered_error: np.ndarray


def convolution_weights(kernel: SIACKernel, xi) -> Tuple[np.ndarray, np.ndarray]:
    """
    Element offsets and weights W of shape (len(xi), len(offsets), p+1).
    """
    dtype = kernel.coefficients.dtype
    points = np.atleast_1d(np.asarray(xi, dtype=dtype))
    degree = kernel.degree
    half_width = kernel.support_half_width
    reach = int(np.ceil(half_width)) + 1
    offsets = np.arange(-reach, reach + 1)
    rule = gauss_legendre_rule(degree + 2, dtype)
    breakpoints = kernel.breakpoints.astype(dtype)

    weights = np.zeros((points.size, offsets.size, degree + 1), dtype=dtype)
    for e, point in enumerate(points):
        for column, offset in enumerate(offsets):
            low = max(point / 2 - offset - 0.5, -half_width)
            high = min(point / 2 - offset + 0.5, half_width)
            if not high > low:
                continue
            cuts = [low] + [b for b in breakpoints if low < b < high] + [high]
            for a, b in zip(cuts[:-1], cuts[1:]):
                s, w = rule.mapped(a, b)
                local = point - 2 * offset - 2 * s
                weights[e, column] += (w * kernel(s)) @ legendre_values(local, degree)
    return offsets, weights


@lru_cache(maxsize=64)
def _cached_weights(degree: int, dtype_name: str, xi_bytes: bytes) -> Tuple[np.ndarray, np.ndarray]:
    dtype = np.dtype(dtype_name)
    return convolution_weights(build_kernel(degree, dtype), np.frombuffer(xi_bytes, dtype=dtype))


def postprocess_values(sol: DGSolution, xi) -> np.ndarray:
    """u* at reference points ξ of every element; shape (N, len(xi))."""
    points = np.atleast_1d(np.asarray(xi, dtype=sol.dtype))
    offsets, weights = _cached_weights(sol.degree, sol.dtype.name, points.tobytes())
    values = np.zeros((sol.mesh.cells, points.size), dtype=sol.dtype)
    for column, offset in enumerate(offsets):
        values += np.roll(sol.coeffs, -offset, axis=0) @ weights[:, column, :].T
    return values


def postprocess_point(sol: DGSolution, x) -> np.ndarray:
    """u*(x) at arbitrary points, periodic in x."""
    index, local = sol.mesh.locate(x, sol.dtype)
    offsets, weights = convolution_weights(build_kernel(sol.degree, sol.dtype), local)
    neighbours = np.mod(index[:, None] + offsets[None, :], sol.mesh.cells)
    return np.einsum("iok,iok->i", weights, sol.coeffs[neighbours])


def _split_rule(degree: int, dtype) -> Tuple[np.ndarray, np.ndarray]:
    """(p+2)-point Gauss on each half of [-1, 1]; exact for u* on every element."""
    rule = gauss_legendre_rule(degree + 2, dtype)
    left_points, left_weights = rule.mapped(-1, 0)
    right_points, right_weights = rule.mapped(0, 1)
    return np.concatenate([left_points, right_points]), np.concatenate([left_weights, right_weights])


def filtered_mass(sol: DGSolution):
    """∫ u* over the periodic domain."""
    points, weights = _split_rule(sol.degree, sol.dtype)
    return np.sum(postprocess_values(sol, points) @ weights) * sol.mesh.spacing(sol.dtype) / 2


def postprocess_errors(sol: DGSolution, exact: Callable) -> PostprocessErrors:
    """
    L2 error of u* against exact(x), plus |u_h − exact| and |u* − exact|
    sampled at p+2 Gauss points per element.
    """
    dtype = sol.dtype
    half = sol.mesh.spacing(dtype) / 2

    points, weights = _split_rule(sol.degree, dtype)
    physical = sol.mesh.physical_points(points, dtype)
    diff = postprocess_values(sol, points) - np.asarray(exact(physical), dtype=dtype)
    l2 = np.sqrt(half * np.sum((diff * diff) @ weights))

    samples = gauss_legendre_rule(sol.degree + 2, dtype).nodes
    sample_x = sol.mesh.physical_points(samples, dtype)
    reference = np.asarray(exact(sample_x), dtype=dtype)
    dg_error = np.abs(sol.element_values(samples) - reference)
    filtered_error = np.abs(postprocess_values(sol, samples) - reference)
    return PostprocessErrors(l2, sample_x.ravel(), dg_error.ravel(), filtered_error.ravel())
