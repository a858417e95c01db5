"""Dense univariate polynomials over a finite field.

On the projective line a section of ``O(m)`` is written, in the affine chart
with coordinate ``t``, as a polynomial of degree at most ``m``; this class is
that chart representation. Coefficients are stored lowest degree first and
the top coefficient is never zero (the zero polynomial has no coefficients).
"""

from __future__ import annotations

from .field import PrimeField


class Poly:
    __slots__ = ("F", "c")

    def __init__(self, F, coeffs=()):
        self.F = F
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # construction -------------------------------------------------------
    @classmethod
    def from_ints(cls, F, ints):
        return cls(F, [F.from_int(v) for v in ints])

    @classmethod
    def monomial(cls, F, k, coeff=1):
        return cls(F, [0] * k + [coeff])

    @classmethod
    def constant(cls, F, a):
        return cls(F, [a])

    # basic properties ---------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` as the sentinel for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def is_one(self):
        return self.c == (1,)

    def lc(self):
        return self.c[-1] if self.c else 0

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c and self.F == other.F
        if isinstance(other, int):
            return self.c == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            if i == 0:
                terms.append(str(a))
            else:
                mon = "t" if i == 1 else f"t^{i}"
                terms.append(mon if a == 1 else f"{a}*{mon}")
        return " + ".join(reversed(terms))

    def to_json(self):
        """Coefficient list, lowest degree first."""
        return [self.F.to_json(a) for a in self.c]

    # arithmetic ---------------------------------------------------------
    def _like(self, coeffs):
        return Poly(self.F, coeffs)

    def __add__(self, other):
        F = self.F
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = F.add(out[i], x)
        return self._like(out)

    def __neg__(self):
        return self._like([self.F.neg(a) for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(self.F.from_int(other))
        a, b = self.c, other.c
        if not a or not b:
            return self._like(())
        F = self.F
        if isinstance(F, PrimeField):
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return self._like([v % p for v in out])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self._like(out)

    __rmul__ = __mul__

    def scale(self, s):
        F = self.F
        return self._like([F.mul(s, a) for a in self.c])

    def __pow__(self, k: int):
        result = self._like((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int):
        """Multiply by ``t^k``."""
        if not self.c:
            return self
        return self._like((0,) * k + self.c)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        rem = list(self.c)
        db = other.degree
        inv_lc = F.inv(other.lc())
        if len(rem) - 1 < db:
            return self._like(()), self
        quo = [0] * (len(rem) - db)
        b = other.c
        for i in range(len(rem) - 1, db - 1, -1):
            coef = rem[i]
            if coef == 0:
                continue
            q = F.mul(coef, inv_lc)
            quo[i - db] = q
            for j in range(db + 1):
                rem[i - db + j] = F.sub(rem[i - db + j], F.mul(q, b[j]))
        return self._like(quo), self._like(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other) -> bool:
        """True when ``self`` divides ``other``."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(self.F.inv(self.c[-1]))

    def derivative(self):
        F = self.F
        return self._like([F.mul(F.from_int(i), a) for i, a in enumerate(self.c)][1:])

    def __call__(self, x):
        F = self.F
        acc = 0
        for a in reversed(self.c):
            acc = F.add(F.mul(acc, x), a)
        return acc

    def compose_pth_root(self):
        """For ``f = g(t^p)`` with coefficients in a perfect field, return the
        ``h`` with ``h^p = f``: drop to every p-th coefficient and take p-th
        roots coefficient-wise."""
        F = self.F
        p = F.p
        if any(a for i, a in enumerate(self.c) if i % p):
            raise ValueError("not a p-th power")
        return self._like([F.pth_root(a) for a in self.c[::p]])

    def reverse(self, n: int):
        """``t^n f(1/t)`` for ``n >= deg f`` (re-expansion in the chart at
        infinity of a section of ``O(n)``)."""
        if self.degree > n:
            raise ValueError(f"degree {self.degree} exceeds twist {n}")
        padded = list(self.c) + [0] * (n + 1 - len(self.c))
        return self._like(reversed(padded))


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor; ``gcd(0, 0) = 0``."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(f: Poly, g: Poly):
    """Return ``(d, s, t)`` with ``s f + t g = d`` and ``d`` monic."""
    F = f.F
    r0, r1 = f, g
    s0, s1 = Poly(F, (1,)), Poly(F, ())
    t0, t1 = Poly(F, ()), Poly(F, (1,))
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    u = F.inv(r0.lc())
    return r0.scale(u), s0.scale(u), t0.scale(u)


def squarefree_decomposition(f: Poly):
    """Squarefree decomposition over ``F[t]``.

    Returns ``(unit, [(factor, multiplicity), ...])`` with monic, pairwise
    coprime, squarefree factors, sorted by multiplicity, such that
    ``unit * prod factor**multiplicity == f``.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    unit = f.lc()
    out = _sqf_monic(f.monic())
    out.sort(key=lambda fm: (fm[1], fm[0].c))
    return unit, out


def _sqf_monic(f: Poly):
    F = f.F
    p = F.p
    if f.degree <= 0:
        return []
    result = []
    fp = f.derivative()
    c = poly_gcd(f, fp)
    w = f.exact_div(c)
    i = 1
    while not w.is_one():
        y = poly_gcd(w, c)
        z = w.exact_div(y)
        if z.degree > 0:
            result.append((z, i))
        w = y
        c = c.exact_div(y)
        i += 1
    if c.degree > 0:
        # What remains is a p-th power: every exponent is divisible by p.
        root = c.compose_pth_root()
        for fac, m in _sqf_monic(root):
            result.append((fac, m * p))
    return _merge(result)


def _merge(pairs):
    by_mult = {}
    for fac, m in pairs:
        by_mult[m] = by_mult[m] * fac if m in by_mult else fac
    return [(fac, m) for m, fac in sorted(by_mult.items())]


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        return False
    return poly_gcd(f, f.derivative()).degree == 0


def interpolate(F, xs, ys) -> Poly:
    """Lagrange interpolation through distinct points ``xs``."""
    result = Poly(F, ())
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num = Poly(F, (1,))
        den = 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * Poly(F, (F.neg(xj), 1))
                den = F.mul(den, F.sub(xi, xj))
        result = result + num.scale(F.mul(yi, F.inv(den)))
    return result
