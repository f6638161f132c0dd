import numpy as np
import pytest

from core.utils import InvalidArgumentError
from numerics.lagrange import LagrangeBasis, lagrange_matrices
from numerics.modal import legendre_derivatives, legendre_values
from numerics.quadrature import gauss_legendre_rule, gauss_radau_right_rule


def test_cardinal_property():
    nodes = gauss_radau_right_rule(4).nodes
    values, _ = lagrange_matrices(LagrangeBasis(nodes), nodes)
    np.testing.assert_allclose(values, np.eye(4), atol=1e-14)


def test_interpolation_reproduces_polynomials_and_slopes():
    nodes = gauss_radau_right_rule(4).nodes
    points = np.linspace(-1, 1, 11)
    values, slopes = lagrange_matrices(LagrangeBasis(nodes), points)
    cubic = lambda x: 2 * x**3 - x + 0.5  # noqa: E731
    np.testing.assert_allclose(values @ cubic(nodes), cubic(points), atol=1e-13)
    np.testing.assert_allclose(slopes @ cubic(nodes), 6 * points**2 - 1, atol=1e-12)


def test_basis_is_callable_and_sums_to_one():
    basis = LagrangeBasis(np.array([-1.0, 0.0, 0.5]))
    assert basis.degree == 2
    np.testing.assert_allclose(basis(np.array([0.3, -0.7])).sum(axis=1), 1.0, atol=1e-15)


@pytest.mark.parametrize("nodes", [[0.0, 0.0, 1.0], []])
def test_invalid_nodes_are_rejected(nodes):
    with pytest.raises(InvalidArgumentError):
        LagrangeBasis(np.array(nodes))


def test_legendre_basis_is_orthonormal():
    rule = gauss_legendre_rule(6)
    basis = legendre_values(rule.nodes, 4)
    gram = basis.T @ (rule.weights[:, None] * basis)
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-14)


def test_legendre_derivatives_match_finite_differences():
    x = np.array([-0.6, 0.1, 0.8])
    h = 1e-6
    numeric = (legendre_values(x + h, 3) - legendre_values(x - h, 3)) / (2 * h)
    np.testing.assert_allclose(legendre_derivatives(x, 3), numeric, atol=1e-8)
