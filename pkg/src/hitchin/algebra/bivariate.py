"""Polynomials in ``u`` with coefficients in ``F[t]``.

Characteristic polynomials ``u^n + a_1 u^{n-1} + ... + a_n`` live here. All
gcds are taken in the UFD ``F[t][u]`` (primitive remainder sequences), which by
Gauss's lemma agree with gcds over ``F(t)`` up to a unit for primitive inputs.
"""

from __future__ import annotations

from .poly import Poly, poly_gcd


class BivarPoly:
    """``sum_k coeffs[k] * u^k`` with ``coeffs[k]`` in ``F[t]``; top coefficient
    nonzero."""

    __slots__ = ("F", "c")

    def __init__(self, F, coeffs=()):
        self.F = F
        c = [x if isinstance(x, Poly) else Poly.from_ints(F, x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = tuple(c)

    @classmethod
    def monic_from(cls, F, a):
        """``u^n + a[0] u^{n-1} + ... + a[n-1]``."""
        n = len(a)
        coeffs = [None] * (n + 1)
        coeffs[n] = Poly(F, (1,))
        for i, ai in enumerate(a, start=1):
            coeffs[n - i] = ai
        return cls(F, coeffs)

    @classmethod
    def from_dict(cls, F, terms):
        """From ``{(i_t, i_u): coeff}``."""
        du = max((j for _, j in terms), default=-1)
        rows = [[] for _ in range(du + 1)]
        for (i, j), v in terms.items():
            row = rows[j]
            if len(row) <= i:
                row.extend([0] * (i + 1 - len(row)))
            row[i] = F.from_int(v) if isinstance(v, int) else v
        return cls(F, [Poly(F, r) for r in rows])

    @property
    def degree(self) -> int:
        """Degree in ``u`` (``-1`` for zero)."""
        return len(self.c) - 1

    @property
    def t_degree(self) -> int:
        return max((x.degree for x in self.c), default=-1)

    def is_zero(self):
        return not self.c

    def lc(self) -> Poly:
        return self.c[-1] if self.c else Poly(self.F, ())

    def coeff(self, k) -> Poly:
        return self.c[k] if 0 <= k < len(self.c) else Poly(self.F, ())

    def is_monic(self):
        return bool(self.c) and self.c[-1].is_one()

    def is_constant_in_u(self):
        return len(self.c) <= 1

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a.is_zero():
                continue
            mon = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if not mon:
                parts.append(f"({a!r})")
            elif a.is_one():
                parts.append(mon)
            else:
                parts.append(f"({a!r})*{mon}")
        return " + ".join(parts)

    def to_json(self):
        return [x.to_json() for x in self.c]

    def _like(self, coeffs):
        return BivarPoly(self.F, coeffs)

    def __add__(self, other):
        n = max(len(self.c), len(other.c))
        return self._like([self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self):
        return self._like([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self._like([x * other for x in self.c])
        if not self.c or not other.c:
            return self._like(())
        out = [Poly(self.F, ())] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x.is_zero():
                continue
            for j, y in enumerate(other.c):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return self._like(out)

    def __pow__(self, k: int):
        result = self._like([Poly(self.F, (1,))])
        for _ in range(k):
            result = result * self
        return result

    def scale(self, s):
        return self._like([x.scale(s) for x in self.c])

    def derivative_u(self):
        F = self.F
        return self._like([x * F.from_int(k) for k, x in enumerate(self.c)][1:])

    def derivative_t(self):
        return self._like([x.derivative() for x in self.c])

    def eval_t(self, t0) -> Poly:
        """Specialise ``t = t0``; returns a polynomial in ``u``."""
        return Poly(self.F, [x(t0) for x in self.c])

    def content(self) -> Poly:
        g = Poly(self.F, ())
        for x in self.c:
            g = poly_gcd(g, x)
            if g.degree == 0:
                break
        return g

    def primitive_part(self):
        if not self.c:
            return self
        g = self.content()
        pp = self._like([x.exact_div(g) for x in self.c])
        return pp.normalized()

    def normalized(self):
        """Scale so that the leading t-coefficient of the leading u-coefficient
        is 1."""
        if not self.c:
            return self
        lead = self.c[-1].lc()
        if lead == 1:
            return self
        return self.scale(self.F.inv(lead))

    def prem(self, other):
        """Pseudo-remainder of ``self`` by ``other`` in ``F[t][u]``."""
        if other.is_zero():
            raise ZeroDivisionError("pseudo-division by zero")
        r = self
        db = other.degree
        lb = other.lc()
        while not r.is_zero() and r.degree >= db:
            k = r.degree - db
            lr = r.lc()
            shifted = self._like([Poly(self.F, ())] * k + [x * lr for x in other.c])
            r = r * lb - shifted
        return r

    def divmod_monic(self, other):
        """Division by a divisor whose leading u-coefficient is a nonzero
        constant."""
        if other.is_zero() or other.lc().degree != 0:
            raise ValueError("divisor must have constant leading u-coefficient")
        F = self.F
        inv = F.inv(other.lc().c[0])
        rem = list(self.c)
        db = other.degree
        if len(rem) - 1 < db:
            return self._like(()), self
        quo = [Poly(F, ())] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            coef = rem[i]
            if coef.is_zero():
                continue
            q = coef.scale(inv)
            quo[i - db] = q
            for j in range(db + 1):
                rem[i - db + j] = rem[i - db + j] - q * other.c[j]
        return self._like(quo), self._like(rem[:db])

    def exact_div(self, other):
        if other.lc().degree == 0:
            q, r = self.divmod_monic(other)
            if not r.is_zero():
                raise ArithmeticError("inexact bivariate division")
            return q
        return _exact_div_general(self, other)

    def divides(self, other) -> bool:
        if self.is_zero():
            return other.is_zero()
        if self.lc().degree == 0:
            return other.divmod_monic(self)[1].is_zero()
        try:
            _exact_div_general(other, self)
            return True
        except ArithmeticError:
            return False

    def is_pth_power_shape(self):
        p = self.F.p
        return all(
            (k % p == 0 or x.is_zero()) and all(a == 0 for i, a in enumerate(x.c) if i % p)
            for k, x in enumerate(self.c)
        )

    def pth_root(self):
        """Inverse of Frobenius for a polynomial in ``t^p`` and ``u^p``."""
        if not self.is_pth_power_shape():
            raise ValueError("not a p-th power")
        p = self.F.p
        return self._like([x.compose_pth_root() for x in self.c[::p]])


def _exact_div_general(a: BivarPoly, b: BivarPoly) -> BivarPoly:
    """Exact quotient ``a / b`` in ``F[t][u]`` (raises if inexact)."""
    F = a.F
    rem = list(a.c)
    db = b.degree
    lb = b.lc()
    if len(rem) - 1 < db:
        if all(x.is_zero() for x in rem):
            return BivarPoly(F, ())
        raise ArithmeticError("inexact bivariate division")
    quo = [Poly(F, ())] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        coef = rem[i]
        if coef.is_zero():
            continue
        q, r = coef.divmod(lb)
        if not r.is_zero():
            raise ArithmeticError("inexact bivariate division")
        quo[i - db] = q
        for j in range(db + 1):
            rem[i - db + j] = rem[i - db + j] - q * b.c[j]
    if any(not x.is_zero() for x in rem[:db]):
        raise ArithmeticError("inexact bivariate division")
    return BivarPoly(F, quo)


def bivar_gcd(f: BivarPoly, g: BivarPoly) -> BivarPoly:
    """Gcd in ``F[t][u]``, normalized (see ``BivarPoly.normalized``);
    ``gcd(f, 0) = f``."""
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    cf, cg = f.content(), g.content()
    cont = poly_gcd(cf, cg)
    a = f.primitive_part()
    b = g.primitive_part()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero() and b.degree > 0:
        r = a.prem(b)
        a, b = b, (r.primitive_part() if not r.is_zero() else r)
    if b.is_zero():
        pp = a.primitive_part()
    else:
        # b is a nonzero element of F[t]; primitive gcd is trivial.
        pp = BivarPoly(f.F, [Poly(f.F, (1,))])
    return (pp * cont).normalized()


def gcd_with_u_derivative(P: BivarPoly) -> BivarPoly:
    """``gcd(P, dP/du)`` over ``F(t)``, returned primitive and normalized."""
    g = bivar_gcd(P, P.derivative_u())
    return g.primitive_part()


def resultant_discriminant(P: BivarPoly) -> Poly:
    """``Res_u(P, dP/du)`` as the determinant of the Sylvester matrix, rows of
    ``P`` first."""
    n = P.degree
    if n < 1:
        raise ValueError("constant in u")
    Q = P.derivative_u()
    m = n - 1
    F = P.F
    zero = Poly(F, ())
    size = n + m
    if Q.is_zero():
        return zero
    # Q may have u-degree < n-1 in characteristic p; the Sylvester matrix is
    # still formed with the formal degree n-1.
    pc = [P.coeff(n - k) for k in range(n + 1)]  # high-first
    qc = [Q.coeff(m - k) for k in range(m + 1)]
    rows = []
    for i in range(m):
        rows.append([zero] * i + pc + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + qc + [zero] * (size - m - 1 - i))
    return bareiss_det(rows)


def bareiss_det(M) -> Poly:
    """Fraction-free determinant of a square matrix over ``F[t]``."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    F = M[0][0].F
    A = [list(row) for row in M]
    sign = 1
    prev = Poly(F, (1,))
    for k in range(n - 1):
        if A[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if piv is None:
                return Poly(F, ())
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]).exact_div(prev)
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return -det if sign < 0 else det


def squarefree_decomposition_bivar(P: BivarPoly):
    """Squarefree decomposition of a polynomial monic in ``u``.

    Factors are monic in ``u``, pairwise coprime and squarefree in
    ``F[t, u]`` (equivalently in ``F(t)[u]``); the product of
    ``factor**multiplicity`` is exactly ``P``.
    """
    if P.is_zero():
        raise ValueError("zero polynomial")
    if not P.is_monic():
        raise ValueError("expected a polynomial monic in u")
    return _sqf_bivar(P)


def _sqf_bivar(f: BivarPoly):
    F = f.F
    p = F.p
    if f.degree <= 0:
        return []
    # A repeated irreducible factor divides both partial derivatives; an
    # irreducible factor r with p | mult also divides both. Factors whose
    # partials both vanish are p-th powers since F is perfect.
    c = bivar_gcd(bivar_gcd(f, f.derivative_u()), f.derivative_t())
    c = c.primitive_part()
    w = f.exact_div(c)
    result = []
    i = 1
    while w.degree > 0:
        y = bivar_gcd(w, c).primitive_part()
        z = w.exact_div(y)
        if z.degree > 0:
            result.append((z.normalized(), i))
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        root = c.normalized().pth_root()
        for fac, m in _sqf_bivar(root):
            result.append((fac, m * p))
    by_mult = {}
    for fac, m in result:
        by_mult[m] = by_mult[m] * fac if m in by_mult else fac
    return [(fac.normalized(), m) for m, fac in sorted(by_mult.items())]
