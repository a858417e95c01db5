import json
import random
from fractions import Fraction

import pytest

from hitchin.algebra import BivarPoly, Poly, PrimeField, gcd_with_u_derivative
from hitchin.algebra.factor import factor_bivariate
from hitchin.numerology import make_setup
from hitchin.spectral import (
    NON_SQUAREFREE,
    SQUAREFREE,
    ZERO,
    CharPoint,
    build_char_poly,
    classify,
    discriminant_status,
    infinity_disc_order,
    multiplicity_profile,
    pushforward_check,
    sample_strata,
    second_chart,
)

from conftest import CORPUS

F5 = PrimeField(5)


def point(F, d, *coeffs):
    return CharPoint(F, d, tuple(Poly.from_ints(F, c) for c in coeffs))


def test_char_poly_examples():
    P = build_char_poly(CharPoint.zero(F5, 3, 2))
    u = BivarPoly(F5, [Poly(F5, ()), Poly(F5, (1,))])
    assert P == u ** 3
    P = build_char_poly(point(F5, 1, [], [0, -1]))
    assert P == BivarPoly.from_dict(F5, {(0, 2): 1, (1, 0): -1})
    P = build_char_poly(point(F5, 2, [1, 2], [3, 0, 4]))
    assert P.coeff(1) == Poly.from_ints(F5, [1, 2])
    assert P.coeff(0) == Poly.from_ints(F5, [3, 0, 4])


def test_degree_bounds_enforced():
    with pytest.raises(ValueError):
        point(F5, 1, [0, 0, 1], [])
    with pytest.raises(ValueError):
        CharPoint(F5, 1, ())


def test_profile_examples():
    c = multiplicity_profile(CharPoint.zero(F5, 3, 1))
    assert c.profile == [(1, 3)] and c.nilpotent and not c.reduced
    c = multiplicity_profile(point(F5, 1, [], [0, -1]))
    assert c.profile == [(2, 1)] and c.reduced and not c.nilpotent
    c = multiplicity_profile(point(F5, 1, [], [0, 0, 1]))
    assert c.profile == [(1, 1), (1, 1)] and c.reduced


def test_discriminant_examples():
    status, disc, flags = discriminant_status(point(F5, 1, [], [0, -1]))
    assert status == SQUAREFREE
    assert disc == Poly.from_ints(F5, [0, 1])     # -4t, raw Sylvester sign
    assert flags["chart_smooth"] and not flags["smooth_candidate"]
    assert flags["infinity"] == "unverified"
    status, disc, _ = discriminant_status(CharPoint.zero(F5, 2, 1))
    assert status == ZERO and disc.is_zero()
    status, disc, _ = discriminant_status(point(F5, 1, [], [0, 0, 1]))
    assert status == NON_SQUAREFREE and disc.degree == 2


def test_second_chart_at_infinity():
    p = point(F5, 1, [], [0, -1])
    assert infinity_disc_order(p) == 1
    _, _, flags = discriminant_status(p, check_infinity=True)
    assert flags["infinity_order"] == 1 and flags["infinity"] == "smooth"
    assert second_chart(second_chart(p)) == p


def test_full_degree_discriminant_is_certified():
    # u^2 - (t^2 - 1) has discriminant 4(t^2 - 1): squarefree, degree 2 = n(n-1)d
    c = classify(point(F5, 1, [], [1, 0, -1]))
    assert c.status == SQUAREFREE
    assert c.flags["smooth_candidate"] and c.flags["infinity"] == "certified"


def test_extension_profiles():
    c = classify(point(F5, 1, [], [2]), extension_degrees=(1, 2))
    # u^2 + 2 is irreducible over F_5 and splits over F_25
    assert c.extensions == {"1": [[2, 1]], "2": [[1, 1], [1, 1]]}
    assert c.flags["irreducible_over_extensions"] is False
    big = classify(point(PrimeField(101), 1, [], [3]), extension_degrees=(3,))
    assert big.extensions["3"] == "unavailable"


def test_classification_json_shape():
    out = classify(point(F5, 1, [], [0, -1])).to_json()
    assert out["profile"] == [[2, 1]]
    assert out["disc"] == [0, 1]
    assert out["status"] == SQUAREFREE
    assert json.loads(json.dumps(out)) == out


# -- seeded corpora -------------------------------------------------------------------

def _corpus(count, seed):
    rng = random.Random(seed)
    for i in range(count):
        F = PrimeField((2, 3, 5)[i % 3])
        n = rng.randint(1, 4)
        d = rng.randint(0, 2) if n <= 3 else rng.randint(0, 1)
        p = CharPoint.random(F, n, d, rng)
        if i % 5 == 0:
            # a perfect power: (u + b)^n style points exercise repeated factors
            b = Poly(F, [F.random(rng) for _ in range(d + 1)])
            base = BivarPoly.monic_from(F, [b])
            P = base ** n
            p = CharPoint(F, d, tuple(P.coeff(n - k) for k in range(1, n + 1)))
        yield p


def test_profile_reassembly_and_discriminant_corpus():
    counts = {ZERO: 0, SQUAREFREE: 0, NON_SQUAREFREE: 0}
    for p in _corpus(CORPUS, 99):
        P = build_char_poly(p)
        prod = BivarPoly(p.F, [Poly(p.F, (1,))])
        for h, m in factor_bivariate(P):
            prod = prod * h ** m
        assert prod == P
        c = classify(p)
        assert sum(k * m for k, m in c.profile) == p.n
        assert c.reduced == all(m == 1 for _, m in c.squarefree_profile)
        assert (c.status == ZERO) == (gcd_with_u_derivative(P).degree > 0)
        counts[c.status] += 1
    assert all(counts.values()), counts


def test_pushforward_examples_and_grid():
    assert pushforward_check(make_setup(0, 1, 2)) == (1, 1)
    assert pushforward_check(make_setup(2, 3, 2)) == (-5, -5)
    for g in range(4):
        assert pushforward_check(make_setup(g, 2 * g + 1, 1)) == (1 - g, 1 - g)
        for d in range(2 * g - 1, 2 * g + 5):
            for n in range(1, 7):
                direct, closed = pushforward_check(make_setup(g, d, n))
                assert direct == closed


# -- sampling ---------------------------------------------------------------------------

def test_sample_regression_q101():
    report = sample_strata(make_setup(0, 2, 2), 101, 1000, 42)
    frac = Fraction(report["fractions"]["non_squarefree_disc"])
    assert frac <= Fraction(5, 100)
    assert report["fractions"]["non_squarefree_disc"] == "1/100"
    assert report["totals"]["zero_disc"] == 0


def test_sample_empty_and_forced_zero():
    s = make_setup(0, 1, 3)
    empty = sample_strata(s, 3, 0, 1)
    assert empty["rows"] == [] and empty["totals"]["nilpotent"] == 0
    forced = sample_strata(s, 3, 25, 1, force_zero=True)
    assert forced["totals"]["nilpotent"] == 25
    assert forced["fractions"]["nilpotent"] == "1/1"
    assert forced["rows"] == [{"profile": [[1, 3]], "status": ZERO, "count": 25, "fraction": "1/1"}]


def test_sample_independent_of_workers():
    s = make_setup(0, 1, 3)
    one = sample_strata(s, 5, 120, 2 ** 64 - 1, workers=1)
    three = sample_strata(s, 5, 120, 2 ** 64 - 1, workers=3)
    assert json.dumps(one) == json.dumps(three)


def test_sample_validation():
    s = make_setup(0, 1, 2)
    with pytest.raises(ValueError):
        sample_strata(s, 4, 10, 0)
    with pytest.raises(ValueError):
        sample_strata(s, 5, -1, 0)
    with pytest.raises(ValueError):
        sample_strata(s, 5, 10, 2 ** 64)
    with pytest.raises(ValueError):
        sample_strata(make_setup(1, 1, 2), 5, 10, 0)
