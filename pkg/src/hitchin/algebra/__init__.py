"""Exact arithmetic kernel: prime fields, polynomials, resultants, rationals."""

from fractions import Fraction

from .bivariate import (
    BivarPoly,
    bareiss_det,
    bivar_gcd,
    gcd_with_u_derivative,
    resultant_discriminant,
    squarefree_decomposition_bivar,
)
from .factor import factor_bivariate, factor_univariate, monic_divisors
from .field import ExtensionField, PrimeField, finite_field, is_prime
from .poly import Poly, interpolate, is_squarefree, poly_gcd, squarefree_decomposition

BigRational = Fraction


def rational_str(x: Fraction) -> str:
    """Serialize as decimal ``"num/den"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den or 1))


__all__ = [
    "BigRational", "BivarPoly", "ExtensionField", "Poly", "PrimeField",
    "bareiss_det", "bivar_gcd", "factor_bivariate", "factor_univariate",
    "finite_field", "gcd_with_u_derivative", "interpolate", "is_prime",
    "is_squarefree", "monic_divisors", "parse_rational", "poly_gcd",
    "rational_str", "resultant_discriminant", "squarefree_decomposition",
    "squarefree_decomposition_bivar",
]
