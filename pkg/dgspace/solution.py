"""
DG solution fields: projection, evaluation, error norms and the text dump format.

Coefficients are stored per element in the orthonormal Legendre basis, so the
L2 projection is c_k = ∫_{-1}^{1} u(x(ξ)) φ_k(ξ) dξ and the element mean is
c_0 / sqrt(2).
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Tuple, Union

import numpy as np

from core.utils import InvalidArgumentError
from dgspace.mesh import Mesh
from numerics.modal import legendre_values
from numerics.precision import resolve_dtype
from numerics.quadrature import gauss_legendre_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DGSolution:
    """
    Piecewise polynomial of degree p on a periodic mesh.

    Attributes:
        mesh: The mesh the field lives on.
        degree: Polynomial degree p.
        coeffs: Array of shape (N, p+1) of modal coefficients.
        time: Time level of the field.
    """

    mesh: Mesh
    degree: int
    coeffs: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs)
        if self.degree < 0:
            raise InvalidArgumentError(f"Polynomial degree must be >= 0, got {self.degree}")
        if coeffs.shape != (self.mesh.cells, self.degree + 1):
            raise InvalidArgumentError(
                f"Coefficient array must have shape ({self.mesh.cells}, {self.degree + 1}), got {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("DG coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dtype(self) -> np.dtype:
        return self.coeffs.dtype

    def with_coeffs(self, coeffs: np.ndarray, time) -> "DGSolution":
        return DGSolution(self.mesh, self.degree, coeffs, time)

    def element_values(self, xi) -> np.ndarray:
        """u_h at reference points ξ of every element; shape (N, len(xi))."""
        basis = legendre_values(np.asarray(xi, dtype=self.dtype), self.degree)
        return self.coeffs @ basis.T

    def evaluate(self, x) -> np.ndarray:
        """Point values with periodic wrap; interface points take the right element."""
        index, xi = self.mesh.locate(x, self.dtype)
        basis = legendre_values(xi, self.degree)
        return np.einsum("ik,ik->i", self.coeffs[index], basis)


def l2_project(fn: Callable, mesh: Mesh, degree: int, dtype=np.float64, time=0.0) -> DGSolution:
    """
    L2 projection of fn onto the DG space with (p+2)-point Gauss quadrature.

    Args:
        fn: Vectorized function of x.
        mesh: Target mesh.
        degree: Polynomial degree p.
        dtype: Working precision of the coefficients.
        time: Time label of the result.
    """
    resolved = resolve_dtype(dtype)
    rule = gauss_legendre_rule(degree + 2, resolved)
    points = mesh.physical_points(rule.nodes, resolved)
    samples = np.asarray(fn(points), dtype=resolved)
    basis = legendre_values(rule.nodes, degree)
    coeffs = (samples * rule.weights) @ basis
    return DGSolution(mesh, degree, coeffs, time)


def eval_traces(sol: DGSolution, j: int) -> Tuple:
    """
    One-sided values (u⁻, u⁺) at interface x_{j-1/2}, periodic in j.

    u⁻ comes from element j-1 at ξ = 1, u⁺ from element j at ξ = -1.
    """
    cells = sol.mesh.cells
    ends = legendre_values(np.array([-1, 1], dtype=sol.dtype), sol.degree)
    left_element = sol.coeffs[(j - 1) % cells]
    right_element = sol.coeffs[j % cells]
    return left_element @ ends[1], right_element @ ends[0]


def l2_error(sol: DGSolution, exact: Callable) -> float:
    """sqrt(∫(u_h − exact)²) with (p+3)-point Gauss per element."""
    rule = gauss_legendre_rule(sol.degree + 3, sol.dtype)
    points = sol.mesh.physical_points(rule.nodes, sol.dtype)
    diff = sol.element_values(rule.nodes) - np.asarray(exact(points), dtype=sol.dtype)
    half = sol.mesh.spacing(sol.dtype) / 2
    return np.sqrt(half * np.sum((diff * diff) @ rule.weights))


def total_mass(sol: DGSolution):
    """∫ u_h over the periodic domain."""
    return np.sum(sol.coeffs[:, 0]) * sol.mesh.spacing(sol.dtype) / np.sqrt(np.asarray(2, dtype=sol.dtype))


def dump_solution(sol: DGSolution, path: Union[str, Path]) -> None:
    """
    Write a solution as key=value header lines followed by N coefficient rows.

    Values use the shortest representation that round-trips in the solution's
    precision, so a dump is locale independent and bit-reproducible.
    """

    def fmt(value) -> str:
        return np.format_float_scientific(np.asarray(value, dtype=sol.dtype)[()], unique=True)

    lines = [
        f"a={fmt(sol.mesh.a)}",
        f"b={fmt(sol.mesh.b)}",
        f"N={sol.mesh.cells}",
        f"p={sol.degree}",
        f"t={fmt(sol.time)}",
        f"dtype={sol.dtype.name}",
    ]
    lines.extend(" ".join(fmt(c) for c in row) for row in sol.coeffs)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote solution dump to {path}")


def load_solution(path: Union[str, Path]) -> DGSolution:
    """Read a file written by dump_solution."""
    header = {}
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
            header[key.strip()] = value.strip()
        else:
            rows.append(line.split())
    missing = {"a", "b", "N", "p", "t"} - header.keys()
    if missing:
        raise InvalidArgumentError(f"Solution dump {path} is missing header keys: {sorted(missing)}")
    dtype = np.dtype(header.get("dtype", "float64"))
    mesh = Mesh(dtype.type(header["a"]), dtype.type(header["b"]), int(header["N"]))
    coeffs = np.array(rows, dtype=dtype)
    return DGSolution(mesh, int(header["p"]), coeffs, dtype.type(header["t"]))
