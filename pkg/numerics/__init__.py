"""Quadrature rules, interpolation bases and working precision."""

from numerics.lagrange import LagrangeBasis, lagrange_matrices
from numerics.modal import legendre_derivatives, legendre_values
from numerics.precision import MP_DIGITS, Precision, from_mp, resolve_dtype
from numerics.quadrature import QuadratureRule, RuleKind, gauss_legendre_rule, gauss_radau_right_rule

__all__ = [
    "LagrangeBasis",
    "MP_DIGITS",
    "Precision",
    "QuadratureRule",
    "RuleKind",
    "from_mp",
    "gauss_legendre_rule",
    "gauss_radau_right_rule",
    "lagrange_matrices",
    "legendre_derivatives",
    "legendre_values",
    "resolve_dtype",
]
