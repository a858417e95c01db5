"""Dimensions of the strata of the global nilpotent cone.

A stratum is labelled by ranks ``nbar = (n_1, ..., n_s)`` and degrees
``ebar = (e_1, ..., e_s)`` of the graded pieces of the flag of twisted images
of powers of a nilpotent Higgs field, index ``i`` running along the flag
(``n_1`` is the rank of the smallest piece).

Each displayed formula is implemented on its own code path so that agreement
between the two forms of a quantity is a real check. The formula helpers only
use ``+``, ``-`` and ``*`` on the degrees and on ``g``, ``d``, so they accept
numpy integer arrays as well as Python ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class FormMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class NilpotentStratumLabel:
    nbar: tuple
    ebar: tuple

    def __post_init__(self):
        nbar = tuple(int(x) for x in self.nbar)
        ebar = tuple(int(x) for x in self.ebar)
        if not nbar or any(x < 1 for x in nbar):
            raise ValueError("ranks must be positive")
        if len(ebar) != len(nbar):
            raise ValueError("nbar and ebar must have equal length")
        object.__setattr__(self, "nbar", nbar)
        object.__setattr__(self, "ebar", ebar)

    @property
    def s(self):
        return len(self.nbar)

    @property
    def n(self):
        return sum(self.nbar)

    @property
    def e(self):
        return sum(self.ebar)

    def rank_admissible(self) -> bool:
        return all(a <= b for a, b in zip(self.nbar, self.nbar[1:]))

    def degree_admissible(self, d: int) -> bool:
        """Where consecutive ranks agree the chain map is injective between
        bundles of equal rank, forcing ``e_{i+1} - d <= e_i``."""
        return all(self.ebar[i + 1] - d <= self.ebar[i]
                   for i in range(self.s - 1) if self.nbar[i + 1] == self.nbar[i])

    def to_json(self):
        return {"nbar": list(self.nbar), "ebar": list(self.ebar)}


def _nbar_ebar(label, ebar=None):
    if isinstance(label, NilpotentStratumLabel):
        return label.nbar, label.ebar
    return tuple(label), tuple(ebar)


def chain_degrees(label, d, ebar=None):
    """``f_i = e_i + n_i (s - i) d``."""
    nbar, ebar = _nbar_ebar(label, ebar)
    s = len(nbar)
    return tuple(ebar[i - 1] + nbar[i - 1] * (s - i) * d for i in range(1, s + 1))


# -- the exponent Delta -------------------------------------------------------

def _delta_all_pairs(nbar, ebar, g, d):
    """First displayed form: sums over all ``i < j`` and over ``i < j - 1``."""
    s = len(nbar)
    n = (None,) + tuple(nbar)
    e = (None,) + tuple(ebar)
    modular = 0
    for i in range(1, s + 1):
        for j in range(i + 1, s + 1):
            modular = modular + (n[j] * e[i] - n[i] * e[j])
    distant_e = 0
    distant_d = 0
    for i in range(1, s + 1):
        for j in range(i + 2, s + 1):
            distant_e = distant_e + (n[j] * e[i] - n[i] * e[j])
            distant_d = distant_d + n[i] * n[j]
    adjacent = 0
    for i in range(1, s):
        adjacent = adjacent + n[i] * n[i + 1]
    return (distant_e - modular) + (distant_d * d + adjacent * (g - 1))


def _delta_telescoped(nbar, ebar, g, d):
    """Second displayed form, with the conventions ``n_0 = e_0 = 0``."""
    s = len(nbar)
    n = [0] + list(nbar)
    e = [0] + list(ebar)
    steps = 0
    for i in range(0, s):
        steps = steps + (n[i + 1] * e[i] - n[i] * e[i + 1])
    far = sum(n[i] * n[j] for i in range(1, s + 1) for j in range(i + 2, s + 1))
    near = sum(n[i] * n[i + 1] for i in range(1, s))
    return -steps + (far * d + near * (g - 1))


def delta_forms(label, g, d, ebar=None):
    nbar, ebar = _nbar_ebar(label, ebar)
    return _delta_all_pairs(nbar, ebar, g, d), _delta_telescoped(nbar, ebar, g, d)


def delta_exponent(label, g, d, ebar=None) -> int:
    """Exponent of ``q`` relating the stratum count to the chain count."""
    a, b = delta_forms(label, g, d, ebar)
    if a != b:
        raise FormMismatch("delta form mismatch")
    return a


# -- dimension of the stack of chains -------------------------------------------

def _chain_dim_f(nbar, fbar, g):
    s = len(nbar)
    n = [0] + list(nbar)
    f = [0] + list(fbar)
    total = 0
    for i in range(s):
        total = total + n[i + 1] * (n[i + 1] - n[i]) * (g - 1)
    degs = 0
    for i in range(s):
        degs = degs + (n[i + 1] * f[i] - n[i] * f[i + 1])
    return total + degs


def _chain_dim_e(nbar, ebar, g, d):
    s = len(nbar)
    n = [0] + list(nbar)
    e = [0] + list(ebar)
    rank_part = sum(n[i + 1] * (n[i + 1] - n[i]) for i in range(s))
    degs = 0
    for i in range(s):
        degs = degs + (n[i + 1] * e[i] - n[i] * e[i + 1])
    links = sum(n[i] * n[i + 1] for i in range(1, s))
    return degs + (rank_part * (g - 1) + links * d)


def chain_dim_forms(label, g, d, ebar=None):
    nbar, ebar = _nbar_ebar(label, ebar)
    fbar = chain_degrees(nbar, d, ebar)
    return _chain_dim_f(nbar, fbar, g), _chain_dim_e(nbar, ebar, g, d)


def chain_stack_dim(label, g, d, ebar=None) -> int:
    a, b = chain_dim_forms(label, g, d, ebar)
    if a != b:
        raise FormMismatch("chain form mismatch")
    return a


# -- stratum dimension and deficit ------------------------------------------------

def stratum_dim_closed(nbar, g, d):
    """``(sum n_i^2)(g-1) + (sum_{i<j} n_i n_j) d``."""
    squares = sum(x * x for x in nbar)
    cross = sum(a * b for a, b in itertools.combinations(nbar, 2))
    return squares * (g - 1) + cross * d


def stratum_dim(label, g, d, ebar=None) -> int:
    """Closed-form dimension, checked against chain dimension plus Delta."""
    nbar, ebar = _nbar_ebar(label, ebar)
    closed = stratum_dim_closed(nbar, g, d)
    assembled = chain_stack_dim(nbar, g, d, ebar) + delta_exponent(nbar, g, d, ebar)
    if assembled != closed:
        raise FormMismatch(f"dim(C) + Delta = {assembled} but closed form gives {closed}")
    return closed


def fiber_dim(n, g, d):
    """``n(g-1) + n(n-1)d/2 + 1`` (no regime check; used for any d)."""
    return n * (g - 1) + n * (n - 1) * d // 2 + 1


def deficit(label, g, d, ebar=None) -> int:
    """``d_f - 1 - dim`` of the stratum, checked against
    ``(d'/2) sum n_i (n_i - 1)`` with ``d' = d - 2g + 2``."""
    nbar, ebar = _nbar_ebar(label, ebar)
    n = sum(nbar)
    value = fiber_dim(n, g, d) - 1 - stratum_dim(nbar, g, d, ebar)
    dprime = d - 2 * g + 2
    twice = dprime * sum(x * (x - 1) for x in nbar)
    assert twice % 2 == 0
    if value != twice // 2:
        raise FormMismatch("deficit identity failed")
    if dprime > 0:
        assert value >= 0
        assert (value == 0) == all(x == 1 for x in nbar)
    elif dprime == 0:
        assert value == 0
    return value


# -- enumeration and the dimension bound ----------------------------------------------

def compositions(n: int):
    """All ordered tuples of positive integers summing to ``n``."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def degree_vectors(s: int, e: int, bound: int):
    """Tuples of ``s`` integers in ``[-bound, bound]`` summing to ``e``."""
    if s == 1:
        if abs(e) <= bound:
            yield (e,)
        return
    for first in range(-bound, bound + 1):
        for rest in degree_vectors(s - 1, e - first, bound):
            yield (first,) + rest


def stratum_row(label: NilpotentStratumLabel, g, d) -> dict:
    return {
        "nbar": list(label.nbar),
        "ebar": list(label.ebar),
        "f": list(chain_degrees(label, d)),
        "delta": delta_exponent(label, g, d),
        "chain_dim": chain_stack_dim(label, g, d),
        "dim": stratum_dim(label, g, d),
        "deficit": deficit(label, g, d),
        "rank_adm": label.rank_admissible(),
        "deg_adm": label.degree_admissible(d),
    }


def proposition_report(g, d, n, e, bound=6) -> dict:
    """Tabulate every rank-admissible stratum with degrees in ``[-bound, bound]``
    and check that no stratum exceeds ``d_f - 1``."""
    rows = []
    for nbar in sorted(compositions(n), key=lambda c: (len(c), c)):
        label0 = NilpotentStratumLabel(nbar, (0,) * len(nbar))
        if not label0.rank_admissible():
            continue
        for ebar in degree_vectors(len(nbar), e, bound):
            rows.append(stratum_row(NilpotentStratumLabel(nbar, ebar), g, d))
    target = fiber_dim(n, g, d) - 1
    max_dim = max(r["dim"] for r in rows) if rows else None
    attaining = sorted({tuple(r["nbar"]) for r in rows if r["dim"] == max_dim})
    large = d > 2 * g - 2
    canonical = d == 2 * g - 2
    if large and rows:
        assert max_dim <= target
        assert max_dim == target and attaining == [(1,) * n]
    if canonical and rows:
        assert all(r["dim"] == target for r in rows)
    return {
        "g": g, "d": d, "n": n, "e": e, "bound": bound,
        "d_f_minus_1": target,
        "max_dim": max_dim,
        "attained_by": [list(a) for a in attaining],
        "rows": rows,
    }


def _ebar_blocks(s, bound, dtype, lead=2):
    """Yield lists of ``s`` integer arrays of shape ``(1, 1, N)`` covering
    ``[-bound, bound]^s``, one block per value of the leading coordinates
    (small blocks keep the working set in cache)."""
    values = np.arange(-bound, bound + 1, dtype=dtype)
    lead = min(lead, s - 1)
    tail = s - lead
    rest = np.stack(np.meshgrid(*([values] * tail), indexing="ij"), axis=-1).reshape(-1, tail)
    rest_cols = [np.ascontiguousarray(rest[:, k]).reshape(1, 1, -1) for k in range(tail)]
    for head in itertools.product(values.tolist(), repeat=lead):
        cols = [np.full((1, 1, len(rest)), h, dtype=dtype) for h in head]
        yield cols + rest_cols


class _Span:
    """Integer interval that records the largest magnitude any arithmetic
    result has reached, to prove a narrow dtype cannot overflow."""

    def __init__(self, lo, hi, peak):
        self.lo, self.hi, self.peak = lo, hi, peak
        peak[0] = max(peak[0], abs(lo), abs(hi))

    def _wrap(self, other):
        return other if isinstance(other, _Span) else _Span(other, other, self.peak)

    def __add__(self, other):
        o = self._wrap(other)
        return _Span(self.lo + o.lo, self.hi + o.hi, self.peak)

    __radd__ = __add__

    def __neg__(self):
        return _Span(-self.hi, -self.lo, self.peak)

    def __sub__(self, other):
        return self + -self._wrap(other)

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        ends = [a * b for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return _Span(min(ends), max(ends), self.peak)

    __rmul__ = __mul__

    def __floordiv__(self, k):
        assert isinstance(k, int) and k > 0
        return _Span(self.lo // k, self.hi // k, self.peak)


def _sweep_peak(nmax, bound, gs, ds) -> int:
    """Bound on every intermediate value of the sweep, by interval arithmetic."""
    peak = [0]
    G = _Span(min(gs), max(gs), peak)
    D = _Span(min(ds), max(ds), peak)
    for n in range(1, nmax + 1):
        for nbar in compositions(n):
            ebar = [_Span(-bound, bound, peak) for _ in nbar]
            closed = stratum_dim_closed(nbar, G, D)
            value = fiber_dim(n, G, D) - 1 - closed
            _ = 2 * value, (D - 2 * G + 2) * sum(x * (x - 1) for x in nbar)
            d1, _ = delta_forms(nbar, G, D, ebar)
            c1, _ = chain_dim_forms(nbar, G, D, ebar)
            _ = c1 + d1
    return peak[0]


def _cells(x, shape, cells):
    """Rows of ``x`` (broadcast to ``shape``) at the flattened grid cells."""
    x = np.broadcast_to(x, shape)
    return x.reshape(shape[0] * shape[1], shape[2])[cells]


def identity_sweep(grid, nmax=6, bound=6) -> dict:
    """Check every dimension identity for all compositions of ``n <= nmax``, all
    ``ebar`` in ``[-bound, bound]^s`` and every ``(g, d)`` in ``grid``.

    Degrees broadcast as ``(1, 1, N)`` arrays against ``d`` along the first
    axis and ``g`` along the second, so terms that do not involve ``g`` are
    evaluated once per ``d``. Only cells of the product that belong to
    ``grid`` are counted. Returns the number of cases and of failures per
    identity.
    """
    gs = sorted({g for g, _ in grid})
    ds = sorted({d for _, d in grid})
    dtype = np.int16 if _sweep_peak(nmax, bound, gs, ds) < 2 ** 15 else np.int64
    G = np.array(gs, dtype=dtype).reshape(1, -1, 1)
    D = np.array(ds, dtype=dtype).reshape(-1, 1, 1)
    mask = np.zeros((len(ds), len(gs), 1), dtype=bool)
    for g, d in set(grid):
        mask[ds.index(d), gs.index(g), 0] = True
    cells = np.flatnonzero(mask)
    dprime = D - 2 * G + 2
    failures = {"delta": 0, "chain": 0, "assembly": 0, "deficit": 0, "deficit_sign": 0}
    checked = 0
    for n in range(1, nmax + 1):
        for nbar in compositions(n):
            closed = stratum_dim_closed(nbar, G, D)
            value = fiber_dim(n, G, D) - 1 - closed
            twice = dprime * sum(x * (x - 1) for x in nbar)
            failures["deficit"] += int(np.count_nonzero((2 * value != twice) & mask))
            ones = all(x == 1 for x in nbar)
            pos = dprime > 0
            bad = (value < 0) & pos
            bad |= ((value == 0) != ones) & pos
            bad |= (value != 0) & (dprime == 0)
            failures["deficit_sign"] += int(np.count_nonzero(bad & mask))
            closed_cells = _cells(closed, (len(ds), len(gs), 1), cells)
            for cols in _ebar_blocks(len(nbar), bound, dtype):
                shape = (len(ds), len(gs), cols[0].size)
                d1, d2 = (_cells(x, shape, cells) for x in delta_forms(nbar, G, D, cols))
                c1, c2 = (_cells(x, shape, cells) for x in chain_dim_forms(nbar, G, D, cols))
                failures["delta"] += int(np.count_nonzero(d1 != d2))
                failures["chain"] += int(np.count_nonzero(c1 != c2))
                failures["assembly"] += int(np.count_nonzero(c1 + d1 != closed_cells))
                checked += d1.size
    return {"cases": checked, "failures": failures, "dtype": np.dtype(dtype).name,
            "ok": not any(failures.values())}
