"""Exact numerics for the support of the Hitchin fibration of GL(n).

Subpackages: ``algebra`` (finite fields, polynomials, discriminants,
factorization), ``numerology`` (dimension formulas and the exclusion
inequality), ``nilstrata`` (nilpotent-cone strata), ``spectral``
(characteristic polynomials over P^1) and ``census`` (groupoid counts).
"""

__version__ = "0.1.0"
