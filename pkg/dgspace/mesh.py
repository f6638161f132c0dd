"""Uniform periodic 1D mesh."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from core.utils import InvalidArgumentError


@dataclass(frozen=True)
class Mesh:
    """
    N equal elements I_j = [x_{j-1/2}, x_{j+1/2}] on the periodic interval [a, b].

    Endpoints may be numpy scalars of any float type so that extended precision
    runs keep an exactly represented domain.
    """

    a: float
    b: float
    cells: int

    def __post_init__(self):
        if not self.b > self.a:
            raise InvalidArgumentError(f"Mesh needs a < b, got [{self.a}, {self.b}]")
        if int(self.cells) != self.cells or self.cells < 1:
            raise InvalidArgumentError(f"Mesh needs N >= 1 elements, got {self.cells}")

    @property
    def length(self):
        return self.b - self.a

    def spacing(self, dtype=np.float64):
        """Element width Δx in the given precision."""
        return (np.asarray(self.b, dtype=dtype) - np.asarray(self.a, dtype=dtype)) / self.cells

    @property
    def dx(self) -> float:
        return float(self.spacing())

    def interfaces(self, dtype=np.float64) -> np.ndarray:
        """x_{j+1/2} for j = -1..N-1 (N+1 points, both endpoints included)."""
        return np.asarray(self.a, dtype=dtype) + np.arange(self.cells + 1, dtype=dtype) * self.spacing(dtype)

    def centers(self, dtype=np.float64) -> np.ndarray:
        return np.asarray(self.a, dtype=dtype) + (np.arange(self.cells, dtype=dtype) + 0.5) * self.spacing(dtype)

    def physical_points(self, xi: np.ndarray, dtype=np.float64) -> np.ndarray:
        """Map reference coordinates ξ ∈ [-1, 1] into every element; shape (N, len(xi))."""
        half = self.spacing(dtype) / 2
        return self.centers(dtype)[:, None] + half * np.asarray(xi, dtype=dtype)[None, :]

    def locate(self, x, dtype=np.float64) -> Tuple[np.ndarray, np.ndarray]:
        """
        Periodic element index and reference coordinate of each point.

        Points on an interface are assigned to the element on their right.
        """
        points = np.atleast_1d(np.asarray(x, dtype=dtype))
        scaled = (points - np.asarray(self.a, dtype=dtype)) / self.spacing(dtype)
        index = np.floor(scaled)
        xi = 2 * (scaled - index) - 1
        return np.mod(index.astype(np.int64), self.cells), xi
