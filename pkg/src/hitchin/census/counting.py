"""Groupoid counts of nilpotent Hitchin pairs and of chains on P^1 over F_q.

Every bundle on the projective line splits, so a groupoid count is a sum
over splitting types ``E`` of ``#{theta on E with the required invariants} /
|Aut E|``. Sums are truncated at a window ``B`` on the spread ``a_1 - a_n`` of
``E`` and carry a tail bound for the part beyond it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..algebra import Poly, PrimeField, is_prime, rational_str
from ..nilstrata import NilpotentStratumLabel, chain_degrees, delta_exponent, stratum_dim
from .bundles import (
    SplittingType,
    aut_bundle_size,
    bun_tail_bound,
    gl_order,
    splittings_up_to,
    splittings_with_spread,
)
from .invariants import (
    CONVENTIONS,
    SAT,
    UNSAT,
    HitchinPairP1,
    extract_invariants,
    rank2_flag,
    rank2_kernel_degree,
)
from .linalg import generic_rank, mat_is_zero, mat_mul

ENUMERATION_BUDGET = 2 ** 30
DEFAULT_WINDOW = 6


class BudgetExceeded(ValueError):
    pass


def _as_label(label, ebar=None) -> NilpotentStratumLabel:
    if isinstance(label, NilpotentStratumLabel):
        return label
    if ebar is None:
        label, ebar = label
    return NilpotentStratumLabel(tuple(label), tuple(ebar))


def _check_q(q):
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")


@dataclass
class StackyCount:
    q: int
    value: Fraction
    window: int
    tail: Fraction = None
    tail_method: str = "none"
    params: dict = field(default_factory=dict)
    by_spread: list = field(default_factory=list)

    def __post_init__(self):
        if self.tail is not None and self.tail < 0:
            raise ValueError("tail bound must be >= 0")

    @property
    def certified(self) -> bool:
        return self.tail is not None and self.tail_method != "empirical"

    def bracket(self):
        """``(low, high)`` enclosing the untruncated value, or ``None``."""
        if not self.certified:
            return None
        return self.value, self.value + self.tail

    def to_json(self):
        return {
            "q": self.q,
            **self.params,
            "value": rational_str(self.value),
            "window": self.window,
            "tail": rational_str(self.tail) if self.tail is not None else None,
            "tail_method": self.tail_method,
        }


# -- per-bundle tallies ---------------------------------------------------------------

def _polys(F, degree):
    """All polynomials of degree <= ``degree`` (none when negative)."""
    if degree < 0:
        return [Poly(F, ())]
    return [Poly(F, cs) for cs in itertools.product(range(F.p), repeat=degree + 1)]


def _rank2_tally(q, d, twists):
    """Tally ``(convention, nbar, ebar) -> #theta`` on ``O(a1) + O(a2)``.

    A nilpotent ``[[alpha, beta], [gamma, -alpha]]`` has ``alpha^2 + beta gamma = 0``.
    For ``gamma = 0`` this forces ``alpha = 0`` and every nonzero ``beta`` has
    kernel ``O(a1)``; otherwise ``beta = -alpha^2 / gamma`` is determined.
    """
    F = PrimeField(q)
    a1, a2 = twists
    e = a1 + a2
    spread = a1 - a2
    tally = Counter()
    tally[(SAT, (2,), (e,))] += 1
    tally[(UNSAT, (2,), (e,))] += 1

    def record(ell, count=1):
        unsat, sat = rank2_flag(e, d, ell)
        tally[(SAT, (1, 1), sat)] += count
        tally[(UNSAT, (1, 1), unsat)] += count

    if spread + d >= 0:
        record(a1, q ** (spread + d + 1) - 1)
    if d - spread >= 0:
        alphas = _polys(F, d)
        for gamma in _polys(F, d - spread):
            if gamma.is_zero():
                continue
            for alpha in alphas:
                if alpha.is_zero():
                    record(a2)
                    continue
                beta, rem = (-(alpha * alpha)).divmod(gamma)
                if not rem.is_zero() or beta.degree > spread + d:
                    continue
                record(rank2_kernel_degree(a1, a2, alpha, beta, gamma))
    return tally


def _generic_tally(q, d, twists):
    """Exhaustive tally over all trace-free ``theta`` on a split bundle."""
    F = PrimeField(q)
    sp = SplittingType(twists)
    n = sp.rank
    slots = [(i, j) for i in range(n) for j in range(n)
             if (i, j) != (n - 1, n - 1) and sp[i] - sp[j] + d >= 0]
    spaces = [_polys(F, sp[i] - sp[j] + d) for i, j in slots]
    zero = Poly(F, ())
    tally = Counter()
    for choice in itertools.product(*spaces):
        M = [[zero] * n for _ in range(n)]
        for (i, j), x in zip(slots, choice):
            M[i][j] = x
        if d >= 0:
            M[n - 1][n - 1] = -sum((M[i][i] for i in range(n - 1)), zero)
        P = M
        for _ in range(n - 1):
            P = mat_mul(P, M)
        if not mat_is_zero(P):
            continue
        inv = extract_invariants(HitchinPairP1(F, sp, d, tuple(map(tuple, M))))
        for conv in CONVENTIONS:
            tally[(conv, inv.nbar, inv.ebar_for(conv))] += 1
    return tally


def _tally_task(args):
    q, d, twists, method = args
    tally = _rank2_tally(q, d, twists) if method == "rank2" else _generic_tally(q, d, twists)
    return sorted(tally.items())


def _enumeration_size(q, d, twists, method):
    n = len(twists)
    if method == "rank2":
        spread = twists[0] - twists[-1]
        size = 1
        if d - spread >= 0:
            size += q ** (d + 1) * q ** (d - spread + 1)
        return size
    slots = sum(max(0, twists[i] - twists[j] + d + 1) for i in range(n) for j in range(n))
    return q ** max(0, slots - (d + 1))


def _pick_method(n, method):
    if method == "auto":
        return "rank2" if n == 2 else "generic"
    if method not in ("rank2", "generic"):
        raise ValueError(f"unknown enumeration method {method!r}")
    if method == "rank2" and n != 2:
        raise ValueError("the rank-2 enumeration needs n = 2")
    return method


def census_tallies(q, d, n, e, window, workers=1, method="auto"):
    """``[(E, tally)]`` for every splitting type of spread <= ``window``, in
    a fixed order independent of ``workers``."""
    _check_q(q)
    method = _pick_method(n, method)
    types = list(splittings_up_to(n, e, window))
    size = sum(_enumeration_size(q, d, E.twists, method) for E in types)
    if size > ENUMERATION_BUDGET:
        raise BudgetExceeded(f"budget exceeded: {size} candidate fields > 2^30")
    tasks = [(q, d, E.twists, method) for E in types]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_tally_task, tasks))
    else:
        results = [_tally_task(t) for t in tasks]
    return [(E, dict(r)) for E, r in zip(types, results)]


def stratum_table(q, d, n, e, window, workers=1, method="auto"):
    """Groupoid counts of every stratum met within the window, both
    conventions, plus the count of the whole nilpotent cone."""
    table = {conv: Counter() for conv in CONVENTIONS}
    totals = Counter()
    for E, tally in census_tallies(q, d, n, e, window, workers, method):
        aut = aut_bundle_size(E, q)
        for (conv, nbar, ebar), k in tally.items():
            table[conv][(nbar, ebar)] += Fraction(k, aut)
            totals[conv] += Fraction(k, aut)
    assert totals[SAT] == totals[UNSAT]
    return {conv: dict(sorted(t.items())) for conv, t in table.items()}, totals[SAT]


def nilpotent_cone_count(q, d, n, e, window, method="auto"):
    """``sum_E #{nilpotent theta on E} / |Aut E|``, computed without labels."""
    _check_q(q)
    method = _pick_method(n, method)
    total = Fraction(0)
    for E in splittings_up_to(n, e, window):
        if method == "rank2":
            total += Fraction(_rank2_nilpotent_count(q, d, E.twists), aut_bundle_size(E, q))
        else:
            total += Fraction(sum(_generic_tally(q, d, E.twists).values()) // 2,
                              aut_bundle_size(E, q))
    return total


def _rank2_nilpotent_count(q, d, twists):
    """Count solutions of ``alpha^2 + beta gamma = 0`` directly."""
    F = PrimeField(q)
    spread = twists[0] - twists[1]
    count = 0
    for alpha in _polys(F, d):
        sq = alpha * alpha
        for gamma in _polys(F, d - spread):
            if gamma.is_zero():
                if sq.is_zero():
                    count += q ** (spread + d + 1) if spread + d >= 0 else 1
                continue
            beta, rem = (-sq).divmod(gamma)
            if rem.is_zero() and (beta.is_zero() or beta.degree <= spread + d):
                count += 1
    return count


# -- strata -------------------------------------------------------------------------------

def support_spread_bound(label: NilpotentStratumLabel, convention: str, d: int):
    """Largest spread of ``E`` that can carry the stratum, when known.

    With saturated degrees and all ``n_i = 1``, ``E`` is an iterated extension
    of line bundles of degrees ``e_i``, so its twists lie in
    ``[min e_i, max e_i]``. In rank 2 the unsaturated degrees determine the
    saturated ones (``e_sat = (e_2 - d, e_1 + d)``).
    """
    if label.s == 1:
        return None
    ebar = label.ebar
    if convention == UNSAT:
        if label.nbar != (1, 1):
            return None
        ebar = (ebar[1] - d, ebar[0] + d)
    if any(x != 1 for x in label.nbar):
        return None
    return max(ebar) - min(ebar)


def bun_count(q, n, e, window) -> StackyCount:
    """``sum 1/|Aut E|`` over splitting types of rank ``n``, degree ``e``."""
    _check_q(q)
    by_spread = []
    for spread in range(window + 1):
        by_spread.append(sum((Fraction(1, aut_bundle_size(E, q))
                              for E in splittings_with_spread(n, e, spread)), Fraction(0)))
    return StackyCount(q, sum(by_spread, Fraction(0)), window,
                       bun_tail_bound(n, q, window, e), "bun-series",
                       {"n": n, "e": e}, by_spread)


def count_stratum(q, d, n, e, label, convention=SAT, window=DEFAULT_WINDOW,
                  workers=1, method="auto") -> StackyCount:
    """Groupoid count of the pairs whose flag invariants equal ``label``."""
    _check_q(q)
    label = _as_label(label)
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if label.n != n or label.e != e:
        raise ValueError("label ranks/degrees do not sum to (n, e)")
    if window < 0:
        raise ValueError("window must be >= 0")
    params = {"d": d, "n": n, "e": e, "label": label.to_json(), "convention": convention}
    if label.s == 1:
        # theta = 0 is the only nilpotent field with s = 1
        bun = bun_count(q, n, e, window)
        return StackyCount(q, bun.value, window, bun.tail, bun.tail_method, params, bun.by_spread)
    bound = support_spread_bound(label, convention, d)
    reach = window if bound is None else max(window, bound)
    key = (convention, label.nbar, label.ebar)
    by_spread = [Fraction(0)] * (reach + 1)
    for E, tally in census_tallies(q, d, n, e, reach, workers, method):
        k = tally.get(key, 0)
        if k:
            by_spread[E.spread] += Fraction(k, aut_bundle_size(E, q))
    value = sum(by_spread[:window + 1], Fraction(0))
    if bound is not None:
        tail = sum(by_spread[window + 1:], Fraction(0))
        method_name = "structural" if window >= bound else "remainder"
    elif window >= 2 and not any(by_spread[-2:]) and any(by_spread):
        tail, method_name = Fraction(0), "empirical"
    else:
        tail, method_name = None, "none"
    return StackyCount(q, value, window, tail, method_name, params, by_spread[:window + 1])


# -- chains -------------------------------------------------------------------------------

def chain_closed_form(q, fbar) -> Fraction:
    """Chains of line bundles ``O(f_s) -> ... -> O(f_1)`` with nonzero maps:
    ``prod (q^{f_i - f_{i+1} + 1} - 1) / (q - 1)^s``, or 0 if some ``f_i < f_{i+1}``."""
    s = len(fbar)
    value = Fraction(1, (q - 1) ** s)
    for hi, lo in zip(fbar, fbar[1:]):
        if hi < lo:
            return Fraction(0)
        value *= q ** (hi - lo + 1) - 1
    return value


def _map_space(F, target, source):
    """Polynomial matrices ``O(source_c) -> O(target_r)``."""
    spaces = [_polys(F, t - s) if t - s >= 0 else [Poly(F, ())]
              for t in target for s in source]
    for entries in itertools.product(*spaces):
        yield [list(entries[r * len(source):(r + 1) * len(source)]) for r in range(len(target))]


def chain_bruteforce(q, nbar, fbar, window) -> Fraction:
    """Count chains by enumerating splitting types (spread <= ``window``) and
    every tuple of generically surjective maps."""
    F = PrimeField(q)
    s = len(nbar)
    total = Fraction(0)
    type_lists = [list(splittings_up_to(n_i, f_i, window)) for n_i, f_i in zip(nbar, fbar)]
    for types in itertools.product(*type_lists):
        count = 1
        for i in range(s - 1):
            target, source = types[i].twists, types[i + 1].twists
            count *= sum(1 for M in _map_space(F, target, source)
                         if generic_rank(M) == len(target))
            if not count:
                break
        aut = math.prod(aut_bundle_size(T, q) for T in types)
        total += Fraction(count, aut)
    return total


def count_chain_stack(q, nbar, fbar, window=DEFAULT_WINDOW) -> StackyCount:
    _check_q(q)
    nbar, fbar = tuple(nbar), tuple(fbar)
    params = {"nbar": list(nbar), "f": list(fbar)}
    if len(nbar) == 1:
        bun = bun_count(q, nbar[0], fbar[0], window)
        return StackyCount(q, bun.value, window, bun.tail, bun.tail_method, params, bun.by_spread)
    if all(x == 1 for x in nbar):
        return StackyCount(q, chain_closed_form(q, fbar), window, Fraction(0), "closed-form", params)
    return StackyCount(q, chain_bruteforce(q, nbar, fbar, window), window, None, "none", params)


# -- the counting identity --------------------------------------------------------------------

def _signed(k: int) -> str:
    return f"{k:+d}"


def verify_count_identity(q, d, n, e, label, window=DEFAULT_WINDOW, workers=1) -> dict:
    """Compare both census conventions with ``q^Delta`` times the chain count.

    A convention passes when the two sides differ by no more than the sum of
    their certified tails; uncertified tails never pass.
    """
    label = _as_label(label)
    delta = delta_exponent(label, 0, d)
    fbar = chain_degrees(label, d)
    chain = count_chain_stack(q, label.nbar, fbar, window)
    factor = Fraction(q) ** delta
    chain_side = factor * chain.value
    per_conv = {}
    matching = []
    for conv in CONVENTIONS:
        census = count_stratum(q, d, n, e, label, conv, window, workers)
        ok = False
        if census.certified and chain.certified:
            slack = census.tail + factor * chain.tail
            ok = abs(census.value - chain_side) <= slack
        if ok:
            matching.append(conv)
        per_conv[conv] = {
            "value": rational_str(census.value),
            "tail": rational_str(census.tail) if census.tail is not None else None,
            "tail_method": census.tail_method,
            "verdict": "PASS" if ok else "FAIL",
        }
    shown = matching[0] if matching else SAT
    return {
        "q": q, "d": d, "n": n, "e": e,
        "label": label.to_json(),
        "convention": shown,
        "value": per_conv[shown]["value"],
        "window": window,
        "tail": per_conv[shown]["tail"],
        "identity": {
            "chain": rational_str(chain_side),
            "chain_count": rational_str(chain.value),
            "f": list(fbar),
            "q_delta": _signed(delta),
            "verdict": "PASS" if matching else "FAIL",
        },
        "conventions": per_conv,
        "matching": matching,
    }


# -- calibration --------------------------------------------------------------------------------

def zeta_p1(q, s) -> Fraction:
    """Zeta function of the projective line at ``q^{-s}``."""
    return 1 / ((1 - Fraction(1, q ** s)) * (1 - Fraction(q, q ** s)))


def siegel_mass(q, n) -> Fraction:
    """``q^{-(n^2-1)} zeta(2) ... zeta(n) / (q - 1)``: the mass of all rank-``n``
    bundles of a fixed degree on the projective line."""
    value = Fraction(1, (q - 1) * q ** (n * n - 1))
    for s in range(2, n + 1):
        value *= zeta_p1(q, s)
    return value


def rank2_series(q, e, window=None) -> Fraction:
    """Sum of ``1/|Aut|`` in rank 2 written as a geometric series.

    Spread 0 occurs for even ``e`` with weight ``1/|GL_2|``; each spread
    ``k >= 1`` of the parity of ``e`` has ``|Aut| = (q-1)^2 q^{k+1}``. With
    ``window=None`` the series is summed in closed form.
    """
    head = Fraction(1, (q * q - 1) * (q * q - q)) if e % 2 == 0 else Fraction(0)
    first = 2 if e % 2 == 0 else 1
    lead = Fraction(1, (q - 1) ** 2 * q ** (first + 1))
    ratio = Fraction(1, q * q)
    if window is None:
        return head + lead / (1 - ratio)
    terms = max(0, (window - first) // 2 + 1)
    return head + lead * (1 - ratio ** terms) / (1 - ratio)


def bun_calibration(q, n, e, window=20, tolerance=Fraction(1, 10 ** 9)) -> dict:
    """Census of the ``theta = 0`` stratum against closed forms."""
    _check_q(q)
    if not 1 <= n <= 3:
        raise ValueError("calibration supports n <= 3")
    census = bun_count(q, n, e, window)
    siegel = siegel_mass(q, n)
    if n == 1:
        oracle, truncated = Fraction(1, q - 1), Fraction(1, q - 1)
    elif n == 2:
        oracle, truncated = rank2_series(q, e), rank2_series(q, e, window)
    else:
        oracle, truncated = siegel, None
    low, high = census.bracket()
    same_truncation = truncated is None or truncated == census.value
    checks = {
        "same_truncation": same_truncation,
        "bracket": low <= oracle <= high,
        "siegel": oracle == siegel,
        "tail_within_tolerance": census.tail <= tolerance,
    }
    return {
        "q": q, "n": n, "e": e, "window": window,
        "census": rational_str(census.value),
        "tail": rational_str(census.tail),
        "oracle": rational_str(oracle),
        "oracle_truncated": rational_str(truncated) if truncated is not None else None,
        "siegel": rational_str(siegel),
        "tolerance": rational_str(tolerance),
        "checks": checks,
        "verdict": "PASS" if all(checks.values()) else "FAIL",
    }


# -- leading exponent --------------------------------------------------------------------------

def leading_exponent(nbar, d, ebar=None, g=0, qs=(2, 3, 5, 7), window=8) -> dict:
    """Leading power of ``q`` in the stratum count, against its dimension.

    For all ``n_i = 1`` the count is ``q^Delta prod (q^{m_i} - 1) / (q - 1)^s``
    and the exponent is read off symbolically. Otherwise the census is run for
    each ``q`` and ``log c = k log q + b_0 + b_1/q + b_2/q^2`` is solved; the
    rounded ``k`` is reported, with an anomaly if it is far from an integer.
    """
    if g != 0:
        raise ValueError("census counts are on P^1 (g = 0)")
    nbar = tuple(nbar)
    if ebar is None:
        ebar = (0,) * len(nbar)
    label = NilpotentStratumLabel(nbar, tuple(ebar))
    expected = stratum_dim(label, g, d)
    out = {"nbar": list(nbar), "ebar": list(label.ebar), "d": d, "g": g,
           "stratum_dim": expected}
    if all(x == 1 for x in nbar):
        fbar = chain_degrees(label, d)
        gaps = [hi - lo + 1 for hi, lo in zip(fbar, fbar[1:])]
        if any(m <= 0 for m in gaps):
            raise ValueError("empty stratum: chain degrees increase")
        exponent = delta_exponent(label, g, d) + sum(gaps) - len(nbar)
        out.update(method="symbolic", exponent=exponent, anomaly=False)
    else:
        if len(qs) < 4:
            raise ValueError("need at least four values of q")
        values = [count_stratum(q, d, label.n, label.e, label, SAT, window).value for q in qs]
        if any(v <= 0 for v in values):
            raise ValueError("empty stratum")
        x = np.array(qs, dtype=float)
        A = np.stack([np.log(x), np.ones_like(x), 1 / x, 1 / x ** 2], axis=1)
        y = np.log(np.array([float(v) for v in values]))
        k = float(np.linalg.lstsq(A, y, rcond=None)[0][0])
        exponent = round(k)
        out.update(method="fit", exponent=exponent, anomaly=abs(k - exponent) > 0.3,
                   counts={str(q): rational_str(v) for q, v in zip(qs, values)})
    out["verdict"] = "PASS" if out["exponent"] == expected and not out["anomaly"] else "FAIL"
    return out


__all__ = [
    "BudgetExceeded", "StackyCount", "bun_calibration", "bun_count",
    "census_tallies", "chain_bruteforce", "chain_closed_form", "count_chain_stack",
    "count_stratum", "gl_order", "leading_exponent", "nilpotent_cone_count",
    "rank2_series", "siegel_mass", "stratum_table", "support_spread_bound",
    "verify_count_identity",
]
