"""Linear algebra over ``F_p`` and over ``F_p(t)`` for polynomial matrices.

Matrices are lists of rows of ``Poly``; a bundle map between split bundles on
the projective line is stored through its entries in the chart ``t``.
"""

from __future__ import annotations

from ..algebra import Poly, poly_gcd


def fp_rank(rows, p: int) -> int:
    """Rank of an integer matrix reduced mod ``p`` (rows are consumed)."""
    rows = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], p - 2, p)
        prow = [x * inv % p for x in prow]
        rows[rank] = prow
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def identity(F, n):
    return [[Poly(F, (1,)) if i == j else Poly(F, ()) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    F = (A[0][0] if A and A[0] else B[0][0]).F
    inner = len(B)
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            acc = Poly(F, ())
            for k in range(inner):
                if not row[k].is_zero() and not B[k][j].is_zero():
                    acc = acc + row[k] * B[k][j]
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_is_zero(A) -> bool:
    return all(x.is_zero() for row in A for x in row)


def transpose(A):
    return [list(col) for col in zip(*A)]


def _echelon(A):
    """Fraction-free reduced echelon form over ``F[t]``.

    Each pivot column is cleared in every other row by cross multiplication;
    returns the reduced rows and ``[(row, pivot column)]``.
    """
    A = [list(r) for r in A]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(A)) if not A[i][c].is_zero()), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        p = A[r][c]
        for i in range(len(A)):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = _remove_content([p * x - f * y for x, y in zip(A[i], A[r])])
        pivots.append((r, c))
        r += 1
        if r == len(A):
            break
    return A, pivots


def _remove_content(row):
    g = Poly(row[0].F, ()) if row else None
    for x in row:
        if not x.is_zero():
            g = poly_gcd(g, x)
    if g is None or g.is_zero() or g.degree <= 0:
        return row
    return [x.exact_div(g) for x in row]


def generic_rank(A) -> int:
    """Rank over ``F(t)``, i.e. on the generic fibre."""
    if not A or not A[0]:
        return 0
    return len(_echelon(A)[1])


def nullspace(A):
    """Polynomial vectors spanning ``{v : A v = 0}`` over ``F(t)``, each with
    coprime entries."""
    R, pivots = _echelon(A)
    F = A[0][0].F
    n = len(A[0])
    pivot_cols = {c: r for r, c in pivots}
    scale = Poly(F, (1,))
    for r, c in pivots:
        scale = scale * R[r][c]
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [Poly(F, ()) for _ in range(n)]
        v[free] = scale
        for r, c in pivots:
            v[c] = -(R[r][free] * scale).exact_div(R[r][c])
        basis.append(_remove_content(v))
    return basis


def left_annihilator(A):
    """Rows ``w`` with ``w A = 0``, spanning the left null space over ``F(t)``."""
    return nullspace(transpose(A))


def sections_kernel_dim(A, twists, m: int, p: int) -> int:
    """``h^0(ker(A) (m))``: dimension of ``{v in sum_j H^0(O(a_j + m)) : A v = 0}``."""
    slots = []
    for j, a in enumerate(twists):
        for k in range(a + m + 1):
            slots.append((j, k))
    if not slots:
        return 0
    if not A:
        return len(slots)
    rows = []
    for row in A:
        top = max((row[j].degree + twists[j] + m for j in range(len(twists))
                   if not row[j].is_zero()), default=-1)
        for ell in range(top + 1):
            eq = []
            for j, k in slots:
                c = row[j].c
                idx = ell - k
                eq.append(c[idx] if 0 <= idx < len(c) else 0)
            if any(eq):
                rows.append(eq)
    if not rows:
        return len(slots)
    return len(slots) - fp_rank(rows, p)
