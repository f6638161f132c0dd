import mpmath
import numpy as np
import pytest

from core.utils import InvalidArgumentError
from numerics.precision import MP_DIGITS, Precision, pi_for
from numerics.quadrature import RuleKind, gauss_legendre_rule, gauss_radau_right_rule


def exact_monomial_integral(k):
    return 0.0 if k % 2 else 2.0 / (k + 1)


@pytest.mark.parametrize("n", range(1, 13))
def test_gauss_legendre_is_exact_to_degree_2n_minus_1(n):
    rule = gauss_legendre_rule(n)
    assert rule.kind is RuleKind.GAUSS_LEGENDRE
    assert rule.exact_degree == 2 * n - 1
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    for k in range(2 * n):
        assert rule.integrate(rule.nodes**k) == pytest.approx(exact_monomial_integral(k), abs=1e-14)


@pytest.mark.parametrize("n", range(1, 13))
def test_right_radau_ends_at_one_and_is_exact_to_degree_2n_minus_2(n):
    rule = gauss_radau_right_rule(n)
    assert rule.nodes[-1] == 1.0
    assert rule.weights.sum() == pytest.approx(2.0, abs=1e-14)
    for k in range(2 * n - 1):
        assert rule.integrate(rule.nodes**k) == pytest.approx(exact_monomial_integral(k), abs=1e-14)


def test_right_radau_misses_degree_2n_minus_1():
    rule = gauss_radau_right_rule(3)
    assert abs(rule.integrate(rule.nodes**5) - exact_monomial_integral(5)) > 1e-3


def test_known_small_rules():
    two = gauss_legendre_rule(2)
    np.testing.assert_allclose(two.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], rtol=0, atol=1e-15)
    np.testing.assert_allclose(two.weights, [1.0, 1.0], atol=1e-15)

    radau = gauss_radau_right_rule(2)
    np.testing.assert_allclose(radau.nodes, [-1 / 3, 1.0], atol=1e-15)
    np.testing.assert_allclose(radau.weights, [1.5, 0.5], atol=1e-15)

    single = gauss_radau_right_rule(1)
    assert single.nodes.tolist() == [1.0]
    assert single.weights.tolist() == [2.0]


@pytest.mark.parametrize("build", [gauss_legendre_rule, gauss_radau_right_rule])
def test_empty_rule_is_rejected(build):
    with pytest.raises(InvalidArgumentError):
        build(0)


def test_extended_precision_rules_are_accurate_to_long_double():
    dtype = Precision.EXTENDED.dtype
    eps = np.finfo(dtype).eps
    rule = gauss_legendre_rule(5, dtype)
    assert rule.nodes.dtype == dtype
    value = rule.integrate(rule.nodes**8)
    assert abs(value - dtype.type(2) / 9) < 20 * eps


def test_object_rules_keep_mpmath_numbers():
    rule = gauss_legendre_rule(3, object)
    assert all(isinstance(node, mpmath.mpf) for node in rule.nodes)
    with mpmath.workdps(MP_DIGITS):
        assert abs(rule.nodes[2] - mpmath.sqrt(mpmath.mpf(3) / 5)) < mpmath.mpf(10) ** -30


def test_mapped_rule_integrates_on_subinterval():
    points, weights = gauss_legendre_rule(3).mapped(0.5, 2.0)
    assert np.sum(weights * points**2) == pytest.approx((2.0**3 - 0.5**3) / 3, rel=1e-14)


def test_pi_is_correctly_rounded_per_precision():
    assert pi_for(np.float64) == np.pi
    extended = pi_for(np.longdouble)
    assert extended.dtype == np.dtype(np.longdouble)
    assert abs(float(extended) - np.pi) < 1e-15
    if np.finfo(np.longdouble).eps < np.finfo(np.float64).eps:
        assert extended != np.longdouble(np.pi)


def test_precision_parse():
    assert Precision.parse("Extended") is Precision.EXTENDED
    with pytest.raises(InvalidArgumentError):
        Precision.parse("quad")
