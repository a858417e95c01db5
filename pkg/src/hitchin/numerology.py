"""Dimension formulas for the Hitchin fibration of GL(n) and the bookkeeping
that rules out non-generic supports.

All quantities are exact integers. ``GeometrySetup`` fixes the curve genus
``g``, the degree ``d`` of the twisting divisor, the rank ``n`` and the bundle
degree ``e``; it is in *large* mode when ``d > 2g - 2`` and in *canonical*
mode when ``d = 2g - 2`` (the divisor is then taken to be canonical).
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field, replace

LARGE = "large"
CANONICAL = "canonical"
EXCLUDED = "Excluded"
NOT_EXCLUDED = "NotExcluded"

MAX_LAMBDA_RANK = 12


class CoprimalityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GeometrySetup:
    g: int
    d: int
    n: int
    e: int = 1
    mode: str = field(default="", compare=True)

    def __post_init__(self):
        for name in ("g", "d", "n", "e"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        if self.g < 0:
            raise ValueError("genus must be >= 0")
        if self.n < 1:
            raise ValueError("rank must be >= 1")
        if self.d < 2 * self.g - 2:
            raise ValueError("unsupported degree regime: d < 2g-2")
        inferred = CANONICAL if self.d == 2 * self.g - 2 else LARGE
        if self.mode and self.mode != inferred:
            raise ValueError(f"mode {self.mode!r} inconsistent with d={self.d}, g={self.g}")
        if inferred == CANONICAL and self.g == 0:
            raise ValueError("canonical mode needs g >= 1 (no effective canonical divisor on P^1)")
        object.__setattr__(self, "mode", inferred)
        if math.gcd(self.n, self.e) != 1:
            warnings.warn(f"gcd(n={self.n}, e={self.e}) != 1", CoprimalityWarning, stacklevel=3)

    @property
    def canonical(self) -> bool:
        return self.mode == CANONICAL

    def with_rank(self, n: int) -> "GeometrySetup":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CoprimalityWarning)
            return replace(self, n=n, e=1, mode="")

    def to_json(self):
        return {"g": self.g, "d": self.d, "n": self.n, "e": self.e, "mode": self.mode}


def make_setup(g, d, n, e=1, canonical=None) -> GeometrySetup:
    """Build a setup, optionally asserting the mode (``canonical=True/False``)."""
    mode = "" if canonical is None else (CANONICAL if canonical else LARGE)
    return GeometrySetup(g, d, n, e, mode)


# -- single-point formulas ---------------------------------------------------

def dim_base(setup: GeometrySetup) -> int:
    """Dimension of the Hitchin base, ``sum_i h^0(O(iD))``.

    Riemann-Roch gives ``n(1-g) + n(n+1)d/2`` when every ``iD`` is non-special;
    for canonical ``D`` the ``i = 1`` summand picks up ``h^1(O(D)) = 1``.
    """
    g, d, n = setup.g, setup.d, setup.n
    if setup.canonical:
        return n * n * (g - 1) + 1
    return n * (1 - g) + n * (n + 1) * d // 2


def dim_fiber(setup: GeometrySetup) -> int:
    """Relative dimension ``n(g-1) + n(n-1)d/2 + 1`` over the smooth locus."""
    g, d, n = setup.g, setup.d, setup.n
    value = n * (g - 1) + n * (n - 1) * d // 2 + 1
    if setup.canonical:
        assert value == n * n * (g - 1) + 1
    return value


def dim_total(setup: GeometrySetup) -> int:
    total = dim_base(setup) + dim_fiber(setup)
    if not setup.canonical:
        assert total == setup.n ** 2 * setup.d + 1, "n^2 d + 1 identity failed"
    return total


def euler_char_spectral(setup: GeometrySetup) -> int:
    """``chi(O_{X_a}) = n(1-g) - n(n-1)d/2``."""
    g, d, n = setup.g, setup.d, setup.n
    return n * (1 - g) - n * (n - 1) * d // 2


def relative_gap(setup: GeometrySetup) -> int:
    """``dim_fiber - dim_base``; equals ``n(2g-2-d)+1`` in large mode and 0 in
    canonical mode."""
    gap = dim_fiber(setup) - dim_base(setup)
    if setup.canonical:
        assert gap == 0
    else:
        assert gap == setup.n * (2 * setup.g - 2 - setup.d) + 1
    return gap


def dims_report(setup: GeometrySetup) -> dict:
    return {
        "d_base": dim_base(setup),
        "d_fiber": dim_fiber(setup),
        "d_total": dim_total(setup),
        "gap": relative_gap(setup),
    }


# -- stratification by (n, m) labels ----------------------------------------

@dataclass(frozen=True)
class StratumLabel:
    """Multiset of pairs ``(n_i, m_i)``: a component of degree ``n_i`` over the
    curve appearing with multiplicity ``m_i``.

    Pairs are kept sorted in descending lexicographic order so that the
    serialization is unique.
    """

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted((tuple(map(int, p)) for p in self.pairs), reverse=True))
        if not pairs:
            raise ValueError("empty label")
        if any(ni < 1 or mi < 1 for ni, mi in pairs):
            raise ValueError("label entries must be positive")
        object.__setattr__(self, "pairs", pairs)

    @property
    def s(self) -> int:
        return len(self.pairs)

    @property
    def n(self) -> int:
        return sum(ni * mi for ni, mi in self.pairs)

    @property
    def reduced_rank(self) -> int:
        """``n_1 + ... + n_s``: each component counted once."""
        return sum(ni for ni, _ in self.pairs)

    def is_elliptic(self) -> bool:
        return self.pairs == ((self.n, 1),)

    def to_json(self):
        return [list(p) for p in self.pairs]

    def sort_key(self):
        return (self.s, tuple((-a, -b) for a, b in self.pairs))

    def __str__(self):
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"


def enumerate_lambda(n: int) -> list:
    """All labels with ``sum n_i m_i = n``, fewest components first and then in
    descending lexicographic order."""
    if not isinstance(n, int) or not 1 <= n <= MAX_LAMBDA_RANK:
        raise ValueError(f"n must be an integer in [1, {MAX_LAMBDA_RANK}]")
    kinds = sorted(((a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a * b <= n),
                   reverse=True)
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(StratumLabel(tuple(acc)))
            return
        for idx in range(start, len(kinds)):
            a, b = kinds[idx]
            if a * b <= remaining:
                acc.append((a, b))
                rec(idx, remaining - a * b, acc)
                acc.pop()

    rec(0, n, [])
    out.sort(key=StratumLabel.sort_key)
    return out


def stratum_base_dim(label: StratumLabel, setup: GeometrySetup) -> int:
    """Generic dimension of the stratum: ``sum_i dim_base(n_i)``."""
    _check_label(label, setup)
    return sum(dim_base(setup.with_rank(ni)) for ni, _ in label.pairs)


def _check_label(label, setup):
    if label.n != setup.n:
        raise ValueError(f"label {label} has rank {label.n}, setup has n={setup.n}")


@dataclass(frozen=True)
class ExclusionRow:
    label: StratumLabel
    lhs: int
    rhs: int
    verdict: str

    def to_json(self):
        return {"lambda": self.label.to_json(), "lhs": self.lhs, "rhs": self.rhs,
                "verdict": self.verdict}


def support_exclusion_test(label: StratumLabel, setup: GeometrySetup) -> ExclusionRow:
    """Can a point of this stratum carry a summand of the direct image?

    Large mode: only if ``1 - s >= (n - sum n_i)(d - 2g + 2)``. In canonical
    mode the left side becomes ``0`` and the right side vanishes.
    """
    _check_label(label, setup)
    n, s = setup.n, label.s
    spread = setup.d - 2 * setup.g + 2
    lhs = 0 if setup.canonical else 1 - s
    rhs = (n - label.reduced_rank) * spread
    ok = lhs >= rhs
    # Same verdict from the relative gaps: sum of component gaps <= total gap.
    gaps = sum(relative_gap(setup.with_rank(ni)) for ni, _ in label.pairs)
    assert ok == (gaps <= relative_gap(setup)), "exclusion forms disagree"
    return ExclusionRow(label, lhs, rhs, NOT_EXCLUDED if ok else EXCLUDED)


def exclusion_sweep(setup: GeometrySetup) -> list:
    rows = [support_exclusion_test(lab, setup) for lab in enumerate_lambda(setup.n)]
    survivors = [r for r in rows if r.verdict == NOT_EXCLUDED]
    if setup.canonical:
        assert len(survivors) == len(rows), "canonical mode excludes nothing"
    else:
        assert len(survivors) == 1 and survivors[0].label.is_elliptic(), \
            "exactly the elliptic stratum should survive"
    return rows


# -- Severi / amplitude ledger ----------------------------------------------

@dataclass(frozen=True)
class LedgerComponent:
    n: int
    d_a: int
    delta: int


@dataclass(frozen=True)
class SevereLedgerEntry:
    """Components ``(n_i, d_{a_i}, delta_i)`` of a point of a stratum; the deltas
    are supplied by the caller."""

    components: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, LedgerComponent) else LedgerComponent(*c)
                      for c in self.components)
        if not comps:
            raise ValueError("ledger entry needs at least one component")
        object.__setattr__(self, "components", comps)

    @property
    def d_a(self) -> int:
        return sum(c.d_a for c in self.components)

    @classmethod
    def generic(cls, label: StratumLabel, setup: GeometrySetup, deltas=None):
        """Each component generic in its own base (``d_{a_i} = dim_base(n_i)``)."""
        deltas = deltas or [0] * label.s
        return cls(tuple(LedgerComponent(ni, dim_base(setup.with_rank(ni)), dl)
                         for (ni, _), dl in zip(label.pairs, deltas)))


def severi_ledger(entry: SevereLedgerEntry, setup: GeometrySetup) -> dict:
    """Evaluate both inequalities of the support argument at one point.

    Upper bound ``d_f - d_A + d_a`` on the abelian rank; per-component Severi
    lower bounds ``d_f(n_i) - d_A(n_i) + d_{a_i}``. The point is excluded from
    the support when the lower bounds add up past the upper bound.
    """
    rows = []
    dab_total = 0
    lower_total = 0
    for c in entry.components:
        sub = setup.with_rank(c.n)
        df_i = dim_fiber(sub)
        if c.delta < 0:
            raise ValueError("delta must be >= 0")
        if c.delta > df_i:
            raise ValueError("delta exceeds fiber dimension")
        dab = df_i - c.delta
        lower = df_i - dim_base(sub) + c.d_a
        dab_total += dab
        lower_total += lower
        rows.append({"n": c.n, "d_a": c.d_a, "delta": c.delta, "d_ab": dab,
                     "severi_lower": lower, "severi_holds": dab >= lower})
    assert dab_total == sum(r["d_ab"] for r in rows)
    upper = dim_fiber(setup) - dim_base(setup) + entry.d_a
    excluded = lower_total > upper
    return {
        "setup": setup.to_json(),
        "components": rows,
        "d_a": entry.d_a,
        "d_ab": dab_total,
        "upper": upper,
        "lower_sum": lower_total,
        "upper_dominates_d_ab": upper >= dab_total,
        "verdict": EXCLUDED if excluded else NOT_EXCLUDED,
    }


# -- independent count of labels ---------------------------------------------

def lambda_count_series(nmax: int) -> list:
    """Coefficients of ``prod_k (1 - x^k)^{-tau(k)}`` up to ``x^nmax``, where
    ``tau(k)`` counts ordered factorizations ``k = n_i m_i``."""
    coeffs = [1] + [0] * nmax
    for k in range(1, nmax + 1):
        tau = sum(1 for a in range(1, k + 1) if k % a == 0)
        for _ in range(tau):
            # multiply by 1/(1 - x^k)
            for i in range(k, nmax + 1):
                coeffs[i] += coeffs[i - k]
    return coeffs


def iter_large_grid(gs=range(0, 4), ns=range(1, 7)):
    """The desk grid ``g in gs, d in [2g-1, 2g+4], n in ns``."""
    for g, n in itertools.product(gs, ns):
        for d in range(2 * g - 1, 2 * g + 5):
            yield g, d, n
