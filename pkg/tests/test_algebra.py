import itertools
import random

import pytest

from hitchin.algebra import (
    BivarPoly,
    Poly,
    PrimeField,
    factor_bivariate,
    factor_univariate,
    finite_field,
    gcd_with_u_derivative,
    is_prime,
    parse_rational,
    poly_gcd,
    rational_str,
    resultant_discriminant,
    squarefree_decomposition,
    squarefree_decomposition_bivar,
)
from hitchin.algebra.poly import poly_xgcd

from conftest import CORPUS, random_monic_bivar, random_poly, structured_monic_bivar


def P(F, *coeffs):
    return Poly.from_ints(F, list(coeffs))


def monic_polys(F, degree):
    for tail in itertools.product(range(F.p), repeat=degree):
        yield Poly(F, list(tail) + [1])


# -- fields -----------------------------------------------------------------------

def test_composite_modulus_rejected():
    for bad in (1, 4, 9, 91, 2 ** 15 + 1):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_prime_field_inverses_by_exhaustion():
    for p in (x for x in range(2, 102) if is_prime(x)):
        F = PrimeField(p)
        for a in range(1, p):
            assert F.mul(a, F.inv(a)) == 1


def test_extension_field_axioms():
    for p, k in ((2, 3), (3, 2), (5, 2)):
        K = finite_field(p, k)
        elems = list(K.elements())
        assert len(elems) == p ** k
        for a in elems:
            if a != 0:
                assert K.mul(a, K.inv(a)) == 1
            assert K.add(a, K.neg(a)) == 0
            assert K.pow(a, p ** k) == a
        rng = random.Random(7)
        for _ in range(200):
            a, b, c = (K.random(rng) for _ in range(3))
            assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
            assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))


def test_pth_root_is_inverse_frobenius():
    K = finite_field(3, 2)
    for a in K.elements():
        assert K.pow(K.pth_root(a), 3) == a


# -- univariate polynomials -------------------------------------------------------

def test_zero_polynomial_is_canonical():
    F = PrimeField(5)
    assert P(F, 0, 0, 0) == P(F)
    assert P(F).degree < 0
    assert P(F, 1, 2, 0).degree == 1


def test_ring_axioms_and_degree_additivity(small_field, rng):
    F = small_field
    for _ in range(200):
        f, g, h = (random_poly(F, 5, rng) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        if not f.is_zero() and not g.is_zero():
            assert (f * g).degree == f.degree + g.degree


def test_division_identity(small_field, rng):
    F = small_field
    for _ in range(200):
        f = random_poly(F, 7, rng)
        g = random_poly(F, 4, rng)
        if g.is_zero():
            continue
        quo, rem = f.divmod(g)
        assert quo * g + rem == f
        assert rem.is_zero() or rem.degree < g.degree


def test_gcd_examples():
    F5, F2 = PrimeField(5), PrimeField(2)
    assert poly_gcd(P(F5, -1, 0, 1), P(F5, -1, 1)) == P(F5, -1, 1)
    f = P(F5, 3, 0, 2)
    assert poly_gcd(f, P(F5)) == f.monic()
    assert poly_gcd(P(F2, 1, 0, 1), P(F2, 0, 1, 1)) == P(F2, 1, 1)
    assert poly_gcd(P(F5), P(F5)).is_zero()


def test_gcd_against_exhaustive_divisor_search(small_field, rng):
    F = small_field
    for _ in range(200):
        f = random_poly(F, 6, rng)
        g = random_poly(F, 6, rng)
        d = poly_gcd(f, g)
        if f.is_zero() and g.is_zero():
            assert d.is_zero()
            continue
        assert d.lc() == 1
        assert d.divides(f) and d.divides(g)
        if max(f.degree, g.degree) <= 3:
            common = [c for k in range(4) for c in monic_polys(F, k)
                      if c.divides(f) and c.divides(g)]
            assert d == max(common, key=lambda c: c.degree)
            assert all(c.divides(d) for c in common)


def test_xgcd_bezout(small_field, rng):
    F = small_field
    for _ in range(100):
        f, g = random_poly(F, 5, rng), random_poly(F, 5, rng)
        d, s, t = poly_xgcd(f, g)
        assert s * f + t * g == d
        assert d == poly_gcd(f, g)


def _reassemble(unit, pairs, F):
    out = Poly(F, (unit,))
    for fac, m in pairs:
        out = out * fac ** m
    return out


def test_squarefree_decomposition_reassembles(small_field, rng):
    F = small_field
    for i in range(CORPUS // 3 + 1):
        f = random_poly(F, 6, rng)
        if f.is_zero():
            continue
        if i % 4 == 0:
            f = f ** F.p          # derivative vanishes identically
        elif i % 4 == 1:
            f = f * random_poly(F, 2, rng) ** 2 or f
        unit, pairs = squarefree_decomposition(f)
        assert _reassemble(unit, pairs, F) == f
        for a, b in itertools.combinations([x for x, _ in pairs], 2):
            assert poly_gcd(a, b).degree == 0
        for fac, _ in pairs:
            assert poly_gcd(fac, fac.derivative()).degree == 0


def test_squarefree_decomposition_zero_rejected():
    with pytest.raises(ValueError, match="zero polynomial"):
        squarefree_decomposition(P(PrimeField(3)))


def test_squarefree_of_pth_power_in_char_two():
    F = PrimeField(2)
    f = P(F, 1, 1, 1) ** 4 * P(F, 0, 1)
    _, pairs = squarefree_decomposition(f)
    assert pairs == [(P(F, 0, 1), 1), (P(F, 1, 1, 1), 4)]


def test_univariate_factorization(small_field, rng):
    F = small_field
    for _ in range(60):
        f = random_poly(F, 6, rng)
        if f.is_zero():
            continue
        unit, facs = factor_univariate(f)
        assert _reassemble(unit, facs, F) == f
        for h, _ in facs:
            # irreducible: no monic divisor of degree 1..deg/2
            assert not any(c.divides(h) for k in range(1, h.degree // 2 + 1)
                           for c in monic_polys(F, k))


# -- bivariate ------------------------------------------------------------------------

def test_bivariate_squarefree_examples():
    F5, F3 = PrimeField(5), PrimeField(3)
    u = BivarPoly(F5, [P(F5), P(F5, 1)])
    one = BivarPoly(F5, [P(F5, 1)])
    for n in (1, 2, 3, 5, 7):
        assert squarefree_decomposition_bivar(u ** n) == [(u, n)]
    f = (u - one) ** 2 * (u + one)
    assert sorted(squarefree_decomposition_bivar(f), key=lambda x: x[1]) == [(u + one, 1), (u - one, 2)]
    t_sq = BivarPoly.from_dict(F3, {(0, 2): 1, (2, 0): -1})
    assert squarefree_decomposition_bivar(t_sq) == [(t_sq, 1)]
    assert gcd_with_u_derivative(t_sq).degree == 0


def test_bivariate_squarefree_reassembles(small_field, rng):
    F = small_field
    for _ in range(CORPUS // 3 + 1):
        Pa = structured_monic_bivar(F, rng)
        pairs = squarefree_decomposition_bivar(Pa)
        prod = BivarPoly(F, [Poly(F, (1,))])
        for fac, m in pairs:
            prod = prod * fac ** m
            assert fac.is_monic()
        assert prod == Pa


def test_discriminant_examples():
    F5 = PrimeField(5)
    # u^2 + a1 u + a2 with generic constants: raw Sylvester determinant
    for a1, a2 in itertools.product(range(5), repeat=2):
        Pa = BivarPoly.monic_from(F5, [P(F5, a1), P(F5, a2)])
        classical = (a1 * a1 - 4 * a2) % 5
        assert resultant_discriminant(Pa) in (P(F5, classical), P(F5, -classical))
    Pa = BivarPoly.monic_from(F5, [P(F5), P(F5, 0, -1)])
    assert resultant_discriminant(Pa) == P(F5, 0, 1)      # -4t = t over F_5
    t = BivarPoly(F5, [P(F5, 0, 1)])
    u = BivarPoly(F5, [P(F5), P(F5, 1)])
    assert resultant_discriminant((u - t) ** 2).is_zero()


def test_discriminant_rejects_constant():
    F = PrimeField(3)
    with pytest.raises(ValueError, match="constant in u"):
        resultant_discriminant(BivarPoly(F, [P(F, 1, 1)]))


def test_discriminant_vanishes_iff_common_factor(small_field, rng):
    F = small_field
    seen = {True: 0, False: 0}
    for i in range(CORPUS // 3 + 1):
        if i % 2:
            Pa = structured_monic_bivar(F, rng)
        else:
            Pa = random_monic_bivar(F, rng.randint(1, 4), 3, rng)
        zero = resultant_discriminant(Pa).is_zero()
        assert zero == (gcd_with_u_derivative(Pa).degree > 0)
        seen[zero] += 1
    assert seen[True] and seen[False]


def test_bivariate_factorization_reassembles(small_field, rng):
    F = small_field
    for _ in range(60):
        Pa = structured_monic_bivar(F, rng, max_n=3)
        facs = factor_bivariate(Pa)
        prod = BivarPoly(F, [Poly(F, (1,))])
        for h, m in facs:
            prod = prod * h ** m
        assert prod == Pa


def test_sum_of_squares_splits_over_f5():
    F = PrimeField(5)
    Pa = BivarPoly.monic_from(F, [P(F), P(F, 0, 0, 1)])
    assert [(h.degree, m) for h, m in factor_bivariate(Pa)] == [(1, 1), (1, 1)]


# -- rationals --------------------------------------------------------------------------

def test_rational_serialization_round_trip():
    from fractions import Fraction
    for x in (Fraction(3, 2), Fraction(-7, 12), Fraction(0), Fraction(10 ** 30 + 1, 3)):
        s = rational_str(x)
        assert "/" in s and parse_rational(s) == x
    assert rational_str(Fraction(4, -6)) == "-2/3"
