"""Characteristic polynomials and spectral curves over the projective line.

A point ``a = (a_1, ..., a_n)`` of the Hitchin base for ``X = P^1`` and
``D = d [infinity]`` is a tuple of polynomials in the chart coordinate ``t``
with ``deg a_i <= i d``. Its spectral curve is the zero locus of
``P_a(u) = u^n + a_1 u^{n-1} + ... + a_n``.

Classification is over ``F_q``; refining over ``F_{q^k}`` is available on
request and reported per field, without any claim of geometric completeness.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    BivarPoly,
    Poly,
    PrimeField,
    finite_field,
    gcd_with_u_derivative,
    is_squarefree,
    rational_str,
    resultant_discriminant,
    squarefree_decomposition_bivar,
)
from .algebra.factor import FactorizationBudgetError, base_change, factor_bivariate
from .algebra.field import MAX_EXTENSION_ORDER
from .numerology import GeometrySetup, euler_char_spectral

ZERO = "zero"
SQUAREFREE = "nonzero-squarefree"
NON_SQUAREFREE = "nonzero-non-squarefree"


@dataclass(frozen=True)
class CharPoint:
    F: object
    d: int
    a: tuple

    def __post_init__(self):
        a = tuple(x if isinstance(x, Poly) else Poly.from_ints(self.F, x) for x in self.a)
        if not a:
            raise ValueError("need n >= 1 coefficients")
        for i, ai in enumerate(a, start=1):
            if ai.degree > i * self.d:
                raise ValueError(f"deg a_{i} = {ai.degree} exceeds bound {i * self.d}")
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return len(self.a)

    @property
    def q(self):
        return self.F.order

    def is_zero(self):
        return all(x.is_zero() for x in self.a)

    @classmethod
    def zero(cls, F, n, d):
        return cls(F, d, tuple(Poly(F, ()) for _ in range(n)))

    @classmethod
    def random(cls, F, n, d, rng):
        return cls(F, d, tuple(Poly(F, [F.random(rng) for _ in range(i * d + 1)])
                               for i in range(1, n + 1)))

    def to_json(self):
        return [x.to_json() for x in self.a]


def build_char_poly(point: CharPoint) -> BivarPoly:
    return BivarPoly.monic_from(point.F, list(point.a))


@dataclass
class SpectralClassification:
    profile: list
    squarefree_profile: list
    reduced: bool
    nilpotent: bool
    disc: Poly = None
    status: str = ""
    flags: dict = field(default_factory=dict)
    extensions: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "profile": [list(p) for p in self.profile],
            "disc": self.disc.to_json() if self.disc is not None else None,
            "status": self.status,
            "flags": dict(self.flags),
        }
        if self.extensions:
            out["extensions"] = self.extensions
        return out


def _profile_of(P):
    facs = factor_bivariate(P)
    return sorted(((h.degree, m) for h, m in facs), reverse=True), facs


def multiplicity_profile(point: CharPoint, extension_degrees=()) -> SpectralClassification:
    """Degrees and multiplicities of the ``F_q``-irreducible factors of ``P_a``.

    ``extension_degrees`` lists ``k`` for which the factorization is repeated
    over ``F_{q^k}``.
    """
    P = build_char_poly(point)
    profile, _ = _profile_of(P)
    sqf = squarefree_decomposition_bivar(P)
    sq_profile = sorted(((g.degree, m) for g, m in sqf), reverse=True)
    assert sum(k * m for k, m in profile) == point.n
    reduced = all(m == 1 for _, m in sq_profile)
    assert reduced == (sum(g.degree for g, m in sqf if m == 1) == point.n)
    cls = SpectralClassification(
        profile=profile,
        squarefree_profile=sq_profile,
        reduced=reduced,
        nilpotent=point.is_zero(),
    )
    for k in extension_degrees:
        cls.extensions[str(k)] = _extension_profile(P, point.F, k)
    return cls


def _extension_profile(P, F, k):
    if k == 1:
        return [list(x) for x in _profile_of(P)[0]]
    if F.order ** k > MAX_EXTENSION_ORDER:
        return "unavailable"
    Fk = finite_field(F.p, k)
    try:
        prof, _ = _profile_of(base_change(P, Fk))
    except FactorizationBudgetError:
        return "unavailable"
    return [list(x) for x in prof]


def discriminant_status(point: CharPoint, check_infinity: bool = False):
    """Discriminant of ``P_a`` on the affine chart and the smoothness flags it
    certifies.

    ``smooth_candidate`` requires a nonzero squarefree discriminant of full
    degree ``n(n-1)d``, which also rules out singularities over infinity. With
    ``check_infinity`` the polynomial is re-expanded in the chart ``s = 1/t``
    and the order of the discriminant at ``s = 0`` decides the fibre there.
    """
    P = build_char_poly(point)
    disc = resultant_discriminant(P)
    n, d = point.n, point.d
    bound = n * (n - 1) * d
    if disc.is_zero():
        status = ZERO
    elif is_squarefree(disc):
        status = SQUAREFREE
    else:
        status = NON_SQUAREFREE
    chart_smooth = status == SQUAREFREE
    full_degree = not disc.is_zero() and disc.degree == bound
    flags = {
        "chart_smooth": chart_smooth,
        "smooth_candidate": chart_smooth and full_degree,
        "infinity": "certified" if full_degree else "unverified",
    }
    if check_infinity and not disc.is_zero() and not full_degree:
        order = infinity_disc_order(point)
        assert order == bound - disc.degree
        flags["infinity_order"] = order
        flags["infinity"] = "smooth" if order <= 1 else "unverified"
    return status, disc, flags


def second_chart(point: CharPoint) -> CharPoint:
    """``P_a`` in the chart at infinity: ``a_i(t) -> s^{id} a_i(1/s)``."""
    return CharPoint(point.F, point.d,
                     tuple(ai.reverse(i * point.d) for i, ai in enumerate(point.a, start=1)))


def infinity_disc_order(point: CharPoint) -> int:
    disc = resultant_discriminant(build_char_poly(second_chart(point)))
    if disc.is_zero():
        raise ValueError("discriminant vanishes identically")
    return next(i for i, c in enumerate(disc.c) if c)


def classify(point: CharPoint, check_infinity=False, extension_degrees=()) -> SpectralClassification:
    cls = multiplicity_profile(point, extension_degrees)
    status, disc, flags = discriminant_status(point, check_infinity)
    # the discriminant vanishes exactly when P_a and dP_a/du share a factor over F_q(t)
    P = build_char_poly(point)
    shares = gcd_with_u_derivative(P).degree > 0
    assert (status == ZERO) == shares
    cls.disc, cls.status = disc, status
    cls.flags = dict(flags, reduced=cls.reduced, nilpotent=cls.nilpotent)
    if extension_degrees:
        irreducible = [cls.extensions[str(k)] == [[point.n, 1]] for k in extension_degrees]
        cls.flags["irreducible_over_extensions"] = all(irreducible)
    return cls


def pushforward_check(setup: GeometrySetup):
    """``sum_{i<n} chi(O_X(-iD))`` against ``chi(O_{X_a})``."""
    g, d, n = setup.g, setup.d, setup.n
    direct = sum(1 - g - i * d for i in range(n))
    closed = euler_char_spectral(setup)
    assert direct == closed
    return direct, closed


def _sample_rng(seed: int, index: int):
    return random.Random(f"{seed}:{index}")


def _classify_range(args):
    q, n, d, seed, start, stop, force_zero, check_infinity = args
    F = PrimeField(q)
    out = []
    for i in range(start, stop):
        if force_zero:
            point = CharPoint.zero(F, n, d)
        else:
            point = CharPoint.random(F, n, d, _sample_rng(seed, i))
        c = classify(point, check_infinity=check_infinity)
        out.append((tuple(map(tuple, c.profile)), c.status, c.reduced,
                    c.nilpotent, c.flags["smooth_candidate"]))
    return out


def sample_strata(setup: GeometrySetup, q: int, count: int, seed: int,
                  force_zero: bool = False, workers: int = 1,
                  check_infinity: bool = False) -> dict:
    """Classify ``count`` uniformly drawn base points.

    Sample ``i`` uses its own generator keyed by ``(seed, i)``, so results do
    not depend on how the range is split across workers.
    """
    if setup.g != 0:
        raise ValueError("explicit spectral models are implemented for g = 0 only")
    if count < 0:
        raise ValueError("count must be >= 0")
    if not 0 <= seed < 2 ** 64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    PrimeField(q)
    n, d = setup.n, setup.d
    chunks = []
    step = max(1, -(-count // max(1, workers * 4)))
    for start in range(0, count, step):
        chunks.append((q, n, d, seed, start, min(count, start + step), force_zero, check_infinity))
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_classify_range, chunks))
    else:
        results = [_classify_range(c) for c in chunks]
    records = [r for chunk in results for r in chunk]
    table = Counter((prof, status) for prof, status, *_ in records)

    def frac(k):
        return rational_str(Fraction(k, count)) if count else "0/1"

    rows = [{"profile": [list(p) for p in prof], "status": status,
             "count": k, "fraction": frac(k)}
            for (prof, status), k in sorted(table.items(), key=lambda kv: (-kv[1], kv[0]))]
    totals = {
        "zero_disc": sum(1 for r in records if r[1] == ZERO),
        "non_squarefree_disc": sum(1 for r in records if r[1] == NON_SQUAREFREE),
        "reduced": sum(1 for r in records if r[2]),
        "nilpotent": sum(1 for r in records if r[3]),
        "smooth_candidate": sum(1 for r in records if r[4]),
    }
    return {
        "q": q, "n": n, "d": d, "g": setup.g, "count": count, "seed": seed,
        "rows": rows,
        "totals": totals,
        "fractions": {k: frac(v) for k, v in totals.items()},
    }
