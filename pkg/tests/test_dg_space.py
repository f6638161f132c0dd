import numpy as np
import pytest

from core.utils import InvalidArgumentError
from dgspace.flux import burgers, lax_friedrichs, linear_advection, variable_coefficient
from dgspace.mesh import Mesh
from dgspace.operator import SemiDiscreteOperator, max_wave_speed, semidiscrete_rhs
from dgspace.solution import (
    DGSolution,
    dump_solution,
    eval_traces,
    l2_error,
    l2_project,
    load_solution,
    total_mass,
)


def sine(x):
    return np.sin(2 * np.pi * x)


def test_mesh_geometry_and_locate():
    mesh = Mesh(0.0, 1.0, 4)
    assert mesh.dx == 0.25
    np.testing.assert_allclose(mesh.interfaces(), [0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(mesh.centers(), [0.125, 0.375, 0.625, 0.875])
    index, xi = mesh.locate([0.25, 0.3, 1.0, -0.1])
    assert index.tolist() == [1, 1, 0, 3]
    np.testing.assert_allclose(xi, [-1.0, -0.6, -1.0, 0.2], atol=1e-14)


@pytest.mark.parametrize("a, b, cells", [(1.0, 0.0, 4), (0.0, 1.0, 0)])
def test_invalid_mesh(a, b, cells):
    with pytest.raises(InvalidArgumentError):
        Mesh(a, b, cells)


def test_solution_shape_is_validated():
    with pytest.raises(InvalidArgumentError):
        DGSolution(Mesh(0.0, 1.0, 4), 2, np.zeros((4, 2)))


def test_projection_reproduces_polynomials():
    mesh = Mesh(0.0, 1.0, 8)
    cubic = lambda x: 1 + x - 3 * x**3  # noqa: E731
    sol = l2_project(cubic, mesh, 3)
    assert l2_error(sol, cubic) < 1e-14
    points = np.array([0.05, 0.4, 0.77])
    np.testing.assert_allclose(sol.evaluate(points), cubic(points), atol=1e-14)


@pytest.mark.convergence
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_projection_error_converges_at_p_plus_one(degree, log_slope):
    cells = [10, 20, 40]
    errors = [l2_error(l2_project(sine, Mesh(0.0, 1.0, n), degree), sine) for n in cells]
    assert log_slope(cells, errors) == pytest.approx(degree + 1, abs=0.2)


def test_traces_wrap_periodically():
    mesh = Mesh(0.0, 1.0, 4)
    sol = l2_project(lambda x: x, mesh, 1)
    u_minus, u_plus = eval_traces(sol, 0)
    assert u_minus == pytest.approx(1.0, abs=1e-14)
    assert u_plus == pytest.approx(0.0, abs=1e-14)
    u_minus, u_plus = eval_traces(sol, 2)
    assert u_minus == pytest.approx(0.5, abs=1e-14)
    assert u_plus == pytest.approx(0.5, abs=1e-14)


def test_lax_friedrichs_is_consistent_and_upwinds_linear_advection():
    linear = linear_advection()
    assert lax_friedrichs(3.0, 3.0, linear, 5.0, 0.0, 0.0) == 3.0
    assert lax_friedrichs(1.0, -4.0, linear, 1.0, 0.0, 0.0) == 1.0


def test_lax_friedrichs_burgers_colliding_states():
    assert lax_friedrichs(1.0, -1.0, burgers(), 1.0, 0.0, 0.0) == 1.5
    assert lax_friedrichs(0.0, 0.0, burgers(), 1.0, 0.0, 0.0) == 0.0


def test_rhs_of_constant_state_vanishes():
    mesh = Mesh(0.0, 1.0, 6)
    sol = l2_project(lambda x: 0 * x + 2.5, mesh, 2)
    np.testing.assert_allclose(semidiscrete_rhs(sol, 0.0, linear_advection()), 0.0, atol=1e-12)


@pytest.mark.convergence
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_rhs_is_consistent_with_minus_u_x(degree, log_slope):
    cells = [20, 40, 80]
    errors = []
    for n in cells:
        mesh = Mesh(0.0, 1.0, n)
        rates = semidiscrete_rhs(l2_project(sine, mesh, degree), 0.0, linear_advection())
        expected = l2_project(lambda x: -2 * np.pi * np.cos(2 * np.pi * x), mesh, degree).coeffs
        errors.append(np.sqrt(mesh.dx / 2 * np.sum((rates - expected) ** 2)))
    assert log_slope(cells, errors) >= degree - 0.3


@pytest.mark.parametrize("flux", [linear_advection(), burgers()], ids=["linear", "burgers"])
def test_rhs_conserves_mass(flux):
    mesh = Mesh(0.0, 1.0, 16)
    sol = l2_project(lambda x: 0.5 + sine(x), mesh, 3)
    rates = semidiscrete_rhs(sol, 0.0, flux)
    assert abs(total_mass(sol.with_coeffs(rates, 0.0))) < 1e-12


@pytest.mark.convergence
def test_manufactured_source_balances_exact_solution(log_slope):
    flux = variable_coefficient()
    t = 0.3
    cells = [20, 40, 80]
    errors = []
    for n in cells:
        mesh = Mesh(0.0, 1.0, n)
        rates = semidiscrete_rhs(l2_project(lambda x: flux.exact(x, t), mesh, 2), t, flux)
        expected = l2_project(lambda x: -2 * np.pi * np.cos(2 * np.pi * (x - t)), mesh, 2).coeffs
        errors.append(np.sqrt(mesh.dx / 2 * np.sum((rates - expected) ** 2)))
    assert log_slope(cells, errors) >= 2 - 0.3


def test_operator_counts_evaluations():
    mesh = Mesh(0.0, 1.0, 8)
    sol = l2_project(sine, mesh, 2)
    operator = SemiDiscreteOperator(mesh, 2, linear_advection())
    operator(0.0, sol.coeffs)
    operator(0.1, sol.coeffs)
    assert operator.evaluations == 2
    operator.reset_counter()
    assert operator.evaluations == 0


def test_burgers_wave_speed_is_max_abs_u():
    mesh = Mesh(0.0, 2 * np.pi, 32)
    sol = l2_project(np.sin, mesh, 2)
    assert max_wave_speed(sol, burgers()) == pytest.approx(1.0, abs=1e-2)


def test_extended_precision_is_preserved():
    mesh = Mesh(np.longdouble(0), np.longdouble(1), 8)
    sol = l2_project(sine, mesh, 2, np.longdouble)
    assert sol.dtype == np.dtype(np.longdouble)
    assert semidiscrete_rhs(sol, np.longdouble(0), linear_advection()).dtype == np.dtype(np.longdouble)


def test_dump_and_load_solution(tmp_path):
    sol = l2_project(sine, Mesh(0.0, 1.0, 5), 2, time=0.25)
    path = tmp_path / "solution.txt"
    dump_solution(sol, path)
    loaded = load_solution(path)
    assert loaded.mesh.cells == 5
    assert loaded.degree == 2
    assert float(loaded.time) == 0.25
    np.testing.assert_array_equal(loaded.coeffs, sol.coeffs)


def test_error_of_zero_solution_is_norm_of_exact():
    sol = l2_project(lambda x: 0 * x, Mesh(0.0, 1.0, 10), 2)
    assert l2_error(sol, sine) == pytest.approx(1 / np.sqrt(2), rel=1e-9)


def test_total_mass_of_constant_and_sine():
    mesh = Mesh(0.0, 2.0, 7)
    assert total_mass(l2_project(lambda x: 0 * x + 3.0, mesh, 1)) == pytest.approx(6.0, rel=1e-14)
    assert abs(total_mass(l2_project(lambda x: np.sin(np.pi * x), mesh, 3))) < 1e-13
