"""Factorization over finite fields.

Univariate: squarefree split, distinct-degree split, then Cantor-Zassenhaus
equal-degree splitting (trace map in characteristic 2). Bivariate (monic in
``u``): a factor of ``u``-degree ``k`` has weighted-degree bounded
coefficients, so it is recovered either by exhaustive search or by
interpolating divisors of the specialisations ``P(t0, u)``.
"""

from __future__ import annotations

import itertools
import random

from .bivariate import BivarPoly, squarefree_decomposition_bivar
from .poly import Poly, interpolate, poly_gcd, squarefree_decomposition

BRUTE_FORCE_BUDGET = 200_000


class FactorizationBudgetError(RuntimeError):
    pass


def pow_mod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly(base.F, (1,))
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def distinct_degree(f: Poly):
    """Split a monic squarefree ``f`` into ``[(g_i, i)]`` where ``g_i`` is the
    product of the irreducible factors of degree ``i``."""
    F = f.F
    Q = F.order
    x = Poly(F, (0, 1))
    out = []
    h = x
    rest = f
    i = 0
    while rest.degree >= 2 * (i + 1):
        i += 1
        h = pow_mod(h, Q, rest)
        g = poly_gcd(h - x, rest)
        if g.degree > 0:
            out.append((g, i))
            rest = rest.exact_div(g)
            h = h % rest if rest.degree > 0 else h
    if rest.degree > 0:
        out.append((rest.monic(), rest.degree))
    return out


def equal_degree(f: Poly, i: int, rng) -> list:
    """Split a monic squarefree ``f`` all of whose factors have degree ``i``."""
    if f.degree == i:
        return [f]
    F = f.F
    Q = F.order
    while True:
        a = Poly(F, [F.random(rng) for _ in range(f.degree)])
        if a.degree <= 0:
            continue
        if F.p == 2:
            k = (Q.bit_length() - 1) * i
            acc = a % f
            term = acc
            for _ in range(k - 1):
                term = (term * term) % f
                acc = acc + term
            b = acc
        else:
            b = pow_mod(a, (Q ** i - 1) // 2, f) - Poly(F, (1,))
        g = poly_gcd(b, f)
        if 0 < g.degree < f.degree:
            return equal_degree(g, i, rng) + equal_degree(f.exact_div(g), i, rng)


def factor_univariate(f: Poly):
    """``(unit, [(irreducible monic factor, multiplicity)])``, sorted."""
    unit, sqf = squarefree_decomposition(f)
    rng = random.Random(0x5EED)
    out = []
    for g, m in sqf:
        for block, i in distinct_degree(g):
            for h in equal_degree(block, i, rng):
                out.append((h, m))
    out.sort(key=lambda hm: (hm[0].degree, hm[0].c, hm[1]))
    return unit, out


def monic_divisors(f: Poly, k: int):
    """All monic divisors of ``f`` of degree ``k``."""
    _, facs = factor_univariate(f)
    found = []
    ranges = [range(m + 1) for _, m in facs]
    for exps in itertools.product(*ranges):
        if sum(e * g.degree for e, (g, _) in zip(exps, facs)) != k:
            continue
        d = Poly(f.F, (1,))
        for e, (g, _) in zip(exps, facs):
            if e:
                d = d * g ** e
        found.append(d)
    return found


def weight_bound(P: BivarPoly) -> int:
    """Smallest ``w >= 0`` with ``deg_t(coeff of u^{n-i}) <= i*w`` for all i."""
    n = P.degree
    w = 0
    for i in range(1, n + 1):
        c = P.coeff(n - i)
        if not c.is_zero():
            w = max(w, -(-c.degree // i))
    return w


def find_factor(P: BivarPoly, k: int, budget: int = BRUTE_FORCE_BUDGET):
    """A monic-in-``u`` factor of ``u``-degree ``k`` of ``P``, or ``None``."""
    F = P.F
    Q = F.order
    w = weight_bound(P)
    slots = sum(i * w + 1 for i in range(1, k + 1))
    brute = Q ** slots
    npoints = k * w + 1
    if brute <= 4096 or (Q < npoints and brute <= budget):
        return _factor_by_search(P, k, w)
    if Q >= npoints:
        return _factor_by_interpolation(P, k, w, npoints)
    raise FactorizationBudgetError(
        f"factor search over {brute} candidates exceeds budget {budget}")


def _factor_by_search(P, k, w):
    F = P.F
    spaces = [itertools.product(F.elements(), repeat=i * w + 1) for i in range(1, k + 1)]
    for coeffs in itertools.product(*spaces):
        cand = [None] * (k + 1)
        cand[k] = Poly(F, (1,))
        for i, cs in enumerate(coeffs, start=1):
            cand[k - i] = Poly(F, cs)
        Qf = BivarPoly(F, cand)
        if Qf.divides(P):
            return Qf
    return None


def _factor_by_interpolation(P, k, w, npoints):
    F = P.F
    options = []
    scan = max(8 * npoints, 32)
    for t0 in F.elements():
        divs = monic_divisors(P.eval_t(t0), k)
        if not divs:
            return None
        options.append((len(divs), t0, divs))
        if len(options) >= scan:
            break
    options.sort(key=lambda o: (o[0], o[1]))
    chosen = options[:npoints]
    xs = [t0 for _, t0, _ in chosen]
    for pick in itertools.product(*[divs for _, _, divs in chosen]):
        cand = [None] * (k + 1)
        cand[k] = Poly(F, (1,))
        ok = True
        for i in range(1, k + 1):
            b = interpolate(F, xs, [d[k - i] for d in pick])
            if b.degree > i * w:
                ok = False
                break
            cand[k - i] = b
        if not ok:
            continue
        Qf = BivarPoly(F, cand)
        if Qf.divides(P):
            return Qf
    return None


def irreducible_factors_sqf(P: BivarPoly, budget: int = BRUTE_FORCE_BUDGET):
    """Irreducible monic-in-``u`` factors of a squarefree monic ``P``."""
    if P.degree <= 1:
        return [P] if P.degree == 1 else []
    for k in range(1, P.degree // 2 + 1):
        Qf = find_factor(P, k, budget)
        if Qf is not None:
            rest = P.exact_div(Qf)
            return irreducible_factors_sqf(Qf, budget) + irreducible_factors_sqf(rest, budget)
    return [P]


def factor_bivariate(P: BivarPoly, budget: int = BRUTE_FORCE_BUDGET):
    """``[(irreducible factor, multiplicity)]`` for ``P`` monic in ``u``, sorted
    by (u-degree, multiplicity, coefficients)."""
    out = []
    for g, m in squarefree_decomposition_bivar(P):
        for h in irreducible_factors_sqf(g, budget):
            out.append((h, m))
    out.sort(key=lambda hm: (hm[0].degree, hm[1], repr(hm[0].c)))
    return out


def base_change(P, Fext):
    """View a polynomial over ``F_p`` as one over an extension of ``F_p``
    (base-field elements share their integer encoding)."""
    if isinstance(P, Poly):
        return Poly(Fext, P.c)
    return BivarPoly(Fext, [Poly(Fext, x.c) for x in P.c])
