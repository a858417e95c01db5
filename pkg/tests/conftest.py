import random
import sys

import pytest

from hitchin.algebra import BivarPoly, Poly, PrimeField

CORPUS = 500


def random_poly(F, max_degree, rng):
    return Poly(F, [F.random(rng) for _ in range(rng.randint(0, max_degree) + 1)])


def random_monic_bivar(F, n, t_degree, rng):
    return BivarPoly.monic_from(F, [random_poly(F, t_degree, rng) for _ in range(n)])


def structured_monic_bivar(F, rng, max_n=4):
    """Products of random monic factors with random multiplicities, so that
    repeated factors and p-th powers actually occur."""
    P = BivarPoly(F, [Poly(F, (1,))])
    target = rng.randint(1, max_n)
    while P.degree < target:
        k = rng.randint(1, target - P.degree)
        m = rng.randint(1, (target - P.degree) // k)
        P = P * random_monic_bivar(F, k, 2, rng) ** m
    return P


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=[2, 3, 5])
def small_field(request):
    return PrimeField(request.param)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
