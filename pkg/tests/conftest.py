import pytest

from quadwief.cyclotomic import an_factorization
from quadwief.quadfield import make_field, parse_element

# the four bases exercised throughout the verification suites, each in
# its own field
TESTED_BASES = [(5, "2"), (2, "1+1*s"), (5, "0+1*w"), (7, "3+1*s")]


@pytest.fixture(scope="session")
def bases():
    out = []
    for d, lit in TESTED_BASES:
        F = make_field(d)
        out.append((F, parse_element(lit, F)))
    return out


@pytest.fixture(scope="session")
def an_cache(bases):
    """Factorizations of A_n, n <= 60, per tested base (shared: these are
    the expensive factoring jobs of the whole suite)."""
    cache = {}
    for F, x in bases:
        cache[(F.d, x.a, x.b)] = {n: an_factorization(x, n) for n in range(1, 61)}
    return cache


def cache_key(F, x):
    return (F.d, x.a, x.b)
