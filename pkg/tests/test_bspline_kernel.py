import mpmath
import numpy as np
import pytest

from core.utils import InvalidArgumentError
from numerics.precision import MP_DIGITS
from numerics.quadrature import gauss_legendre_rule
from siac.bspline import BSpline, bspline_breakpoints, bspline_eval, bspline_moments
from siac.kernel import build_kernel, kernel_coefficients


@pytest.mark.parametrize(
    "order, x, expected",
    [
        (1, -0.5, 1.0),
        (1, 0.5, 0.0),
        (1, 0.0, 1.0),
        (2, 0.0, 1.0),
        (2, 0.5, 0.5),
        (2, 1.0, 0.0),
        (3, 0.0, 0.75),
        (3, 1.0, 0.125),
        (4, 0.0, 2 / 3),
        (4, 2.5, 0.0),
    ],
)
def test_known_values(order, x, expected):
    assert float(bspline_eval(order, x)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 6])
def test_partition_of_unity(order):
    x = np.linspace(-0.5, 0.5, 11, endpoint=False)
    total = sum(bspline_eval(order, x + k) for k in range(-order - 1, order + 2))
    np.testing.assert_allclose(total, 1.0, atol=1e-14)


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_moments(order):
    moments = bspline_moments(order, 3)
    assert float(moments[0]) == pytest.approx(1.0, abs=1e-15)
    assert float(moments[1]) == pytest.approx(0.0, abs=1e-15)
    # Variance of a sum of `order` independent uniforms on [-1/2, 1/2]
    assert float(moments[2]) == pytest.approx(order / 12, abs=1e-15)


def test_breakpoints():
    np.testing.assert_array_equal(bspline_breakpoints(3), [-1.5, -0.5, 0.5, 1.5])


def test_invalid_order():
    with pytest.raises(InvalidArgumentError):
        bspline_eval(0, 0.0)


def test_bspline_type_matches_functions():
    spline = BSpline(4)
    assert spline.support == (-2.0, 2.0)
    np.testing.assert_array_equal(spline.breakpoints, bspline_breakpoints(4))
    x = np.linspace(-2.5, 2.5, 21)
    np.testing.assert_array_equal(spline(x), bspline_eval(4, x))
    with pytest.raises(InvalidArgumentError):
        BSpline(0)


def test_linear_kernel_coefficients():
    np.testing.assert_allclose(kernel_coefficients(1), [-1 / 12, 7 / 6, -1 / 12], atol=1e-15)


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_kernel_is_symmetric(degree):
    kernel = build_kernel(degree)
    np.testing.assert_allclose(kernel.coefficients, kernel.coefficients[::-1], rtol=1e-13)
    x = np.linspace(0, kernel.support_half_width, 17)
    np.testing.assert_allclose(kernel(x), kernel(-x), atol=1e-13)
    assert kernel(np.array([kernel.support_half_width + 0.1]))[0] == 0.0


def _kernel_moments(kernel, count, points_per_piece):
    """∫ K(y) y^m dy for m < count, piece by piece between breakpoints."""
    rule = gauss_legendre_rule(points_per_piece, kernel.coefficients.dtype)
    dtype = kernel.coefficients.dtype
    breakpoints = [mpmath.mpf(float(b)) if dtype == object else dtype.type(b) for b in kernel.breakpoints]
    moments = [0] * count
    magnitudes = [0] * count
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        y, w = rule.mapped(a, b)
        values = w * kernel(y)
        for m in range(count):
            moments[m] += np.sum(values * y**m)
            magnitudes[m] += np.sum(np.abs(values * y**m))
    return moments, magnitudes


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_kernel_reproduces_polynomials_in_high_precision(degree):
    with mpmath.workdps(MP_DIGITS):
        kernel = build_kernel(degree, object)
        moments, _ = _kernel_moments(kernel, 2 * degree + 1, 2 * degree + 2)
        assert abs(moments[0] - 1) < 1e-10
        for m in range(1, 2 * degree + 1):
            assert abs(moments[m]) < 1e-10


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_kernel_moments_in_float64(degree):
    moments, magnitudes = _kernel_moments(build_kernel(degree), 2 * degree + 1, 2 * degree + 2)
    assert moments[0] == pytest.approx(1.0, abs=1e-12 * magnitudes[0])
    for m in range(1, 2 * degree + 1):
        assert abs(moments[m]) < 1e-12 * magnitudes[m]


def test_kernel_does_not_reproduce_beyond_2p():
    with mpmath.workdps(MP_DIGITS):
        moments, _ = _kernel_moments(build_kernel(1, object), 5, 4)
        # odd moments vanish by symmetry, the fourth does not
        assert abs(moments[3]) < 1e-10
        assert abs(moments[4] + mpmath.mpf(24) / 90) < 1e-10


def test_extended_precision_kernel():
    kernel = build_kernel(2, np.longdouble)
    assert kernel.coefficients.dtype == np.dtype(np.longdouble)
    assert kernel(np.zeros(1, dtype=np.longdouble)).dtype == np.dtype(np.longdouble)
