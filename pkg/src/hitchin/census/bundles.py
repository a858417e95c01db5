"""Split vector bundles on the projective line and their automorphism groups."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby


def hom_dim(a: int, b: int) -> int:
    """``h^0(O(b - a))``, the dimension of ``Hom(O(a), O(b))``."""
    return max(0, b - a + 1)


@dataclass(frozen=True, order=True)
class SplittingType:
    twists: tuple

    def __post_init__(self):
        tw = tuple(int(x) for x in self.twists)
        if any(x < y for x, y in zip(tw, tw[1:])):
            raise ValueError("twists must be sorted in descending order")
        object.__setattr__(self, "twists", tw)

    @property
    def rank(self):
        return len(self.twists)

    @property
    def degree(self):
        return sum(self.twists)

    @property
    def spread(self):
        return self.twists[0] - self.twists[-1] if self.twists else 0

    def blocks(self):
        """Sizes of the runs of equal twists."""
        return [len(list(g)) for _, g in groupby(self.twists)]

    def __iter__(self):
        return iter(self.twists)

    def __getitem__(self, i):
        return self.twists[i]

    def to_json(self):
        return list(self.twists)


def gl_order(k: int, q: int) -> int:
    out = 1
    for i in range(k):
        out *= q ** k - q ** i
    return out


def aut_bundle_size(splitting, q: int) -> int:
    """Order of ``Aut(O(a_1) + ... + O(a_n))`` over ``F_q``.

    Automorphisms are block upper triangular with respect to the twists: the
    diagonal blocks are ``GL`` of the equal-twist runs and each strictly
    decreasing pair ``a_i > a_j`` contributes the free part ``Hom(O(a_j), O(a_i))``.
    """
    tw = tuple(splitting)
    size = 1
    for k in SplittingType(tw).blocks():
        size *= gl_order(k, q)
    unipotent = sum(hom_dim(b, a) for i, a in enumerate(tw) for b in tw[i + 1:] if a > b)
    return size * q ** unipotent


def splittings_with_spread(n: int, e: int, spread: int):
    """Splitting types of rank ``n``, degree ``e`` and exactly the given spread,
    in descending lexicographic order."""
    if n == 1:
        if spread == 0:
            yield SplittingType((e,))
        return
    # a_n = a_1 - spread and the middle twists lie in [a_n, a_1]
    for middle in _descending_runs(n - 2, spread):
        # sum = n*a_n + spread + sum(middle offsets)
        rest = e - spread - sum(middle)
        if rest % n:
            continue
        low = rest // n
        tw = (low + spread,) + tuple(low + m for m in middle) + (low,)
        yield SplittingType(tw)


def _descending_runs(length, top):
    if length == 0:
        yield ()
        return
    for first in range(top, -1, -1):
        for rest in _descending_runs(length - 1, first):
            yield (first,) + rest


def splittings_up_to(n: int, e: int, window: int):
    """All splitting types of rank ``n`` and degree ``e`` with spread at most
    ``window``, ordered by spread."""
    for spread in range(window + 1):
        yield from splittings_with_spread(n, e, spread)


def bun_tail_bound(n: int, q: int, window: int, e: int = None) -> Fraction:
    """Upper bound for ``sum 1/|Aut E|`` over splitting types of spread
    ``> window``.

    For ``n = 1`` there is nothing beyond spread 0. For ``n = 2`` the tail is
    the series ``sum_k 1/((q-1)^2 q^{k+1})`` over ``k > window``; given ``e``
    only ``k = e mod 2`` occurs and the value returned is the exact tail. For
    larger ``n`` each type of spread ``S`` has ``|Aut| >= (q-1)^n q^{S+1}`` and
    there are at most ``(S+1)^{n-2}`` of them, which gives a geometric majorant
    with ratio ``((B+3)/(B+2))^{n-2} / q``.
    """
    if n == 1:
        return Fraction(0)
    first = window + 1
    if n == 2:
        if e is None:
            return Fraction(1, (q - 1) ** 2 * q ** (first + 1)) / (1 - Fraction(1, q))
        first += (first - e) % 2
        return Fraction(1, (q - 1) ** 2 * q ** (first + 1)) / (1 - Fraction(1, q * q))
    term = Fraction((first + 1) ** (n - 2), (q - 1) ** n * q ** (first + 1))
    ratio = Fraction(first + 2, first + 1) ** (n - 2) / q
    if ratio >= 1:
        raise ValueError("window too small for a convergent tail majorant")
    return term / (1 - ratio)
