"""Finite fields with integer-encoded elements.

Prime fields store residues directly. Extension fields ``F_{p^k}`` encode an
element ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` (modulo a fixed irreducible
polynomial) as the integer ``sum c_i p^i`` and multiply through log/antilog
tables built from a primitive element.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

MAX_PRIME = 2 ** 15
MAX_EXTENSION_ORDER = 2 ** 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field ``F_p`` for a prime ``p <= 2**15``."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"field order must be prime, got {p!r}")
        if p > MAX_PRIME:
            raise ValueError(f"prime {p} exceeds supported bound {MAX_PRIME}")
        self.p = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, value: int) -> int:
        return value % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return pow(a, -1, self.p)

    def pow(self, a, k):
        return pow(a, k, self.p)

    def from_int(self, k: int):
        return k % self.p

    def pth_root(self, a):
        # Frobenius is the identity on F_p.
        return a

    def elements(self):
        return range(self.p)

    def random(self, rng):
        return rng.randrange(self.p)

    def to_json(self, a):
        return a


class ExtensionField:
    """``F_{p^k}`` realised as ``F_p[x]/(m(x))`` for the lexicographically first
    monic irreducible ``m`` of degree ``k``."""

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        if p ** k > MAX_EXTENSION_ORDER:
            raise ValueError(f"F_{p}^{k} exceeds supported order {MAX_EXTENSION_ORDER}")
        self.p = p
        self.degree = k
        self.order = p ** k
        self.zero = 0
        self.one = 1
        self.modulus, self._exp, self._log = _build_tables(p, k)

    def __repr__(self):
        return f"ExtensionField({self.p}, {self.degree})"

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.degree == self.degree)

    def __hash__(self):
        return hash(("F", self.p, self.degree))

    def _digits(self, a):
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _pack(self, digits):
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def add(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        da, db = self._digits(a), self._digits(b)
        return self._pack([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a):
        if self.p == 2:
            return a
        return self._pack([-x % self.p for x in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in %r" % self)
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def pow(self, a, k):
        if a == 0:
            return 0 if k > 0 else 1
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def from_int(self, k: int):
        return k % self.p

    def pth_root(self, a):
        return self.pow(a, self.order // self.p)

    def elements(self):
        return range(self.order)

    def random(self, rng):
        return rng.randrange(self.order)

    def to_json(self, a):
        return self._digits(a)


def _polymulmod(a, b, mod, p):
    """Product of low-first coefficient lists modulo a monic ``mod``."""
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    prod = prod[:k] + [0] * max(0, k - len(prod))
    return prod


@lru_cache(maxsize=None)
def _build_tables(p, k):
    order = p ** k
    for tail in itertools.product(range(p), repeat=k):
        mod = list(tail) + [1]
        if k > 1 and mod[0] == 0:
            continue
        # x must generate the multiplicative group: then mod is irreducible
        # and primitive at the same time.
        exp = [0] * (order - 1)
        log = [0] * order
        cur = [1] + [0] * (k - 1)
        ok = True
        x = [0, 1] if k > 1 else [_first_primitive_root(p)]
        for i in range(order - 1):
            v = 0
            for c in reversed(cur):
                v = v * p + c
            if i > 0 and v == 1:
                ok = False
                break
            exp[i] = v
            log[v] = i
            cur = _polymulmod(cur, x, mod, p) if k > 1 else [cur[0] * x[0] % p]
        if ok:
            return tuple(mod), exp, log
    raise RuntimeError(f"no primitive modulus found for F_{p}^{k}")


def _first_primitive_root(p):
    if p == 2:
        return 1
    phi = p - 1
    factors = [f for f in range(2, phi + 1) if phi % f == 0 and is_prime(f)]
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in factors):
            return g
    raise RuntimeError("unreachable")


def finite_field(p: int, k: int = 1):
    """Return ``F_p`` (``k == 1``) or the extension ``F_{p^k}``."""
    if k == 1:
        return PrimeField(p)
    return ExtensionField(p, k)
