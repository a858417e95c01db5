"""Nilpotent Higgs fields on split bundles over P^1 and their flag invariants."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import Poly, poly_gcd
from ..nilstrata import NilpotentStratumLabel
from .bundles import SplittingType
from .linalg import (
    generic_rank,
    identity,
    left_annihilator,
    mat_is_zero,
    mat_mul,
    sections_kernel_dim,
)

SAT = "sat"
UNSAT = "unsat"
CONVENTIONS = (SAT, UNSAT)


class NotNilpotent(ValueError):
    pass


def entry_bound(splitting, d, i, j):
    """Degree bound of the ``(i, j)`` entry ``O(a_j) -> O(a_i + d)``; negative
    means the entry must vanish."""
    return splitting[i] - splitting[j] + d


@dataclass(frozen=True)
class HitchinPairP1:
    F: object
    splitting: SplittingType
    d: int
    theta: tuple

    def __post_init__(self):
        sp = self.splitting if isinstance(self.splitting, SplittingType) else SplittingType(self.splitting)
        object.__setattr__(self, "splitting", sp)
        n = sp.rank
        rows = []
        for row in self.theta:
            rows.append(tuple(x if isinstance(x, Poly) else Poly.from_ints(self.F, x) for x in row))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError("theta must be an n x n matrix")
        for i in range(n):
            for j in range(n):
                if not rows[i][j].is_zero() and rows[i][j].degree > entry_bound(sp, self.d, i, j):
                    raise ValueError(f"entry ({i},{j}) exceeds its degree bound")
        object.__setattr__(self, "theta", tuple(rows))

    @property
    def n(self):
        return self.splitting.rank

    @property
    def e(self):
        return self.splitting.degree

    def power(self, k):
        M = identity(self.F, self.n)
        for _ in range(k):
            M = mat_mul(M, [list(r) for r in self.theta])
        return M

    def nilpotency_index(self):
        """Least ``k`` with ``theta^k = 0``; ``None`` when not nilpotent."""
        M = identity(self.F, self.n)
        for k in range(self.n + 1):
            if mat_is_zero(M):
                return k
            M = mat_mul(M, [list(r) for r in self.theta])
        return None


def kernel_splitting(M, twists, p: int) -> SplittingType:
    """Splitting type of ``ker M`` for a polynomial matrix ``M`` acting on
    ``O(a_1) + ... + O(a_n)``.

    With ``K = sum O(b_l)``, ``h^0(K(m))`` increases by ``#{b_l >= -m}`` at
    each step of ``m``; scanning ``m`` upwards from the point where no section
    exists reads off every ``b_l`` until the increment reaches the rank of
    ``K``.
    """
    twists = tuple(twists)
    n = len(twists)
    rank = n - (generic_rank(M) if M else 0)
    if rank == 0:
        return SplittingType(())
    spread = max(twists) - min(twists)
    max_deg = max((x.degree for row in M for x in row), default=0)
    lowest = min(twists) - n * max(0, spread + max_deg) - 1
    m = -max(twists) - 1
    h_prev = sections_kernel_dim(M, twists, m, p)
    if h_prev != 0:
        raise RuntimeError("kernel has sections beyond the top twist")
    inc_prev = 0
    found = []
    while m < -lowest:
        m += 1
        h = sections_kernel_dim(M, twists, m, p)
        inc = h - h_prev
        found.extend([-m] * (inc - inc_prev))
        if inc == rank:
            return SplittingType(tuple(sorted(found, reverse=True)))
        h_prev, inc_prev = h, inc
    raise RuntimeError("kernel rank never stabilized within the proven window")


@dataclass(frozen=True)
class FlagInvariants:
    s: int
    nbar: tuple
    ebar: tuple
    ebar_sat: tuple
    kernel_types: tuple = ()

    def ebar_for(self, convention):
        return self.ebar_sat if convention == SAT else self.ebar

    def label(self, convention) -> NilpotentStratumLabel:
        return NilpotentStratumLabel(self.nbar, self.ebar_for(convention))

    def to_json(self):
        return {
            "s": self.s,
            "nbar": list(self.nbar),
            "ebar": list(self.ebar),
            "ebar_sat": list(self.ebar_sat),
            "kernels": [k.to_json() for k in self.kernel_types],
        }


def _differences(values):
    out, prev = [], 0
    for v in values:
        out.append(v - prev)
        prev = v
    return tuple(out)


def extract_invariants(pair: HitchinPairP1) -> FlagInvariants:
    """Ranks and degrees of the flag ``E_i = Im(theta^{s-i})((i-s)D)``.

    The saturated variant replaces ``E_i`` by its saturation in ``E``: the
    vectors lying generically in the column span of ``theta^k``. That is the
    kernel of any polynomial matrix whose rows span the left null space of
    ``theta^k``, so its degree again comes from a kernel splitting.
    """
    s = pair.nilpotency_index()
    if s is None:
        raise NotNilpotent("not in the nilpotent cone")
    n, e, d, p = pair.n, pair.e, pair.d, pair.F.p
    twists = pair.splitting.twists
    kernels, ranks, degs, sat_degs = [], [], [], []
    for i in range(1, s + 1):
        k = s - i
        M = pair.power(k)
        ker = kernel_splitting(M, twists, p)
        kernels.append(ker)
        rank_im = n - ker.rank
        ranks.append(rank_im)
        degs.append(e - ker.degree + rank_im * (i - s) * d)
        if rank_im == n:
            sat_degs.append(e)
        else:
            sat = kernel_splitting(left_annihilator(M), twists, p)
            assert sat.rank == rank_im
            sat_degs.append(sat.degree)
    nbar = _differences(ranks)
    ebar = _differences(degs)
    ebar_sat = _differences(sat_degs)
    assert sum(nbar) == n and sum(ebar) == e and sum(ebar_sat) == e
    assert all(x >= y for x, y in zip(sat_degs, degs)), "saturation lowered a degree"
    assert all(a <= b for a, b in zip(nbar, nbar[1:])), "flag ranks not monotone"
    return FlagInvariants(s, nbar, ebar, ebar_sat, tuple(kernels))


def rank2_kernel_degree(a1, a2, alpha, beta, gamma) -> int:
    """Degree of the kernel line of a nonzero nilpotent
    ``[[alpha, beta], [gamma, -alpha]]`` on ``O(a1) + O(a2)``."""
    if not (beta.is_zero() and alpha.is_zero()):
        v = (beta, -alpha)
    else:
        v = (alpha, gamma)
    g = poly_gcd(*v)
    v = tuple(x.exact_div(g) if not x.is_zero() else x for x in v)
    return min(a - x.degree for a, x in zip((a1, a2), v) if not x.is_zero())


def rank2_flag(e, d, kernel_degree):
    """``(ebar, ebar_sat)`` for a nonzero nilpotent in rank 2."""
    ell = kernel_degree
    return (e - ell - d, ell + d), (ell, e - ell)
