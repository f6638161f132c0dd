"""Orthonormal Legendre basis φ_k = sqrt((2k+1)/2) P_k on [-1, 1]."""

import numpy as np


def _scales(degree: int, dtype) -> np.ndarray:
    return np.sqrt(np.asarray([(2 * k + 1) / 2 for k in range(degree + 1)], dtype=dtype))


def _as_points(xi) -> np.ndarray:
    x = np.atleast_1d(np.asarray(xi))
    if x.dtype.kind not in "fO":
        x = x.astype(np.float64)
    return x


def legendre_values(xi, degree: int) -> np.ndarray:
    """φ_k(ξ) for k = 0..degree; shape (len(xi), degree+1)."""
    x = _as_points(xi)
    table = np.empty((x.size, degree + 1), dtype=x.dtype)
    table[:, 0] = 1
    if degree >= 1:
        table[:, 1] = x
    for k in range(2, degree + 1):
        table[:, k] = ((2 * k - 1) * x * table[:, k - 1] - (k - 1) * table[:, k - 2]) / k
    return table * _scales(degree, x.dtype)


def legendre_derivatives(xi, degree: int) -> np.ndarray:
    """φ_k'(ξ) for k = 0..degree, from P_k' = (2k-1) P_{k-1} + P_{k-2}'."""
    x = _as_points(xi)
    plain = legendre_values(x, degree) / _scales(degree, x.dtype)
    slopes = np.zeros_like(plain)
    for k in range(1, degree + 1):
        slopes[:, k] = (2 * k - 1) * plain[:, k - 1]
        if k >= 2:
            slopes[:, k] += slopes[:, k - 2]
    return slopes * _scales(degree, x.dtype)
