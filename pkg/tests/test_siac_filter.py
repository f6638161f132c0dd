import numpy as np
import pytest

from dgspace.mesh import Mesh
from dgspace.solution import l2_project, total_mass
from siac.filter import (
    convolution_weights,
    filtered_mass,
    postprocess_errors,
    postprocess_point,
    postprocess_values,
)
from siac.kernel import build_kernel


def sine(x):
    return np.sin(2 * np.pi * x)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_constants_are_reproduced(degree):
    sol = l2_project(lambda x: 0 * x + 3.0, Mesh(0.0, 1.0, 12), degree)
    np.testing.assert_allclose(postprocess_values(sol, [-0.7, 0.0, 0.4]), 3.0, atol=1e-12)


@pytest.mark.parametrize("degree", [1, 2])
def test_polynomials_up_to_degree_p_are_reproduced_locally(degree):
    # A linear function is not periodic, so check an element far from the wrap.
    sol = l2_project(lambda x: 2 * x, Mesh(0.0, 1.0, 40), degree)
    middle = 20
    xi = np.array([-0.5, 0.25])
    expected = 2 * sol.mesh.physical_points(xi)[middle]
    np.testing.assert_allclose(postprocess_values(sol, xi)[middle], expected, atol=1e-12)


def test_weights_cover_the_kernel_support():
    kernel = build_kernel(2)
    offsets, weights = convolution_weights(kernel, [0.0])
    assert weights.shape == (1, offsets.size, 3)
    # Element means: Σ_o W[., o, 0] / sqrt(2) integrates K to one
    assert np.sum(weights[0, :, 0]) * np.sqrt(2) == pytest.approx(1.0, abs=1e-13)
    assert np.all(weights[0, 0] == 0) and np.all(weights[0, -1] == 0)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_filter_conserves_mass(degree):
    sol = l2_project(lambda x: 0.3 + sine(x) + np.cos(6 * np.pi * x), Mesh(0.0, 1.0, 10), degree)
    assert filtered_mass(sol) == pytest.approx(total_mass(sol), abs=1e-13)


def test_point_evaluation_matches_element_values():
    sol = l2_project(sine, Mesh(0.0, 1.0, 16), 2)
    xi = np.array([-0.6, 0.1, 0.9])
    element = 5
    x = sol.mesh.physical_points(xi)[element]
    np.testing.assert_allclose(postprocess_point(sol, x), postprocess_values(sol, xi)[element], atol=1e-13)


def test_point_evaluation_wraps_periodically():
    sol = l2_project(sine, Mesh(0.0, 1.0, 16), 2)
    np.testing.assert_allclose(postprocess_point(sol, [0.1]), postprocess_point(sol, [1.1]), atol=1e-13)
    np.testing.assert_allclose(postprocess_point(sol, [0.1]), postprocess_point(sol, [-0.9]), atol=1e-13)


@pytest.mark.convergence
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_filtered_projection_converges_at_2p_plus_1(degree, log_slope):
    cells = [10, 20, 40]
    errors = [postprocess_errors(l2_project(sine, Mesh(0.0, 1.0, n), degree), sine).l2 for n in cells]
    assert log_slope(cells, errors) >= 2 * degree + 0.5


def test_filtered_error_beats_dg_error():
    sol = l2_project(sine, Mesh(0.0, 1.0, 20), 2)
    errors = postprocess_errors(sol, sine)
    assert np.max(errors.filtered_error) < np.max(errors.dg_error)


def test_error_samples_have_consistent_shapes():
    cells, degree = 8, 2
    errors = postprocess_errors(l2_project(sine, Mesh(0.0, 1.0, cells), degree), sine)
    expected = cells * (degree + 2)
    assert errors.x.shape == errors.dg_error.shape == errors.filtered_error.shape == (expected,)
    assert np.all(np.diff(np.sort(errors.x)) > 0)


def test_extended_precision_filter():
    mesh = Mesh(np.longdouble(0), np.longdouble(1), 10)
    sol = l2_project(sine, mesh, 2, np.longdouble)
    assert postprocess_values(sol, [0.0]).dtype == np.dtype(np.longdouble)
    assert postprocess_errors(sol, sine).l2.dtype == np.dtype(np.longdouble)
