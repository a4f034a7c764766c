import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadwief import ratarith
from quadwief.errors import NonResidue
from quadwief.ratarith import (
    FactorMap,
    factor_integer,
    hensel_sqrt,
    is_probable_prime,
    kronecker,
    primes_up_to,
    v_p,
)

from oracles import brute_quadratic_character


def test_kronecker_examples():
    assert kronecker(5, 11) == 1  # 4^2 = 5 mod 11
    assert kronecker(5, 3) == -1
    assert kronecker(12, 3) == 0


def test_kronecker_brute_force_small_odd():
    for n in range(3, 200, 2):
        for a in range(-20, 40):
            assert kronecker(a, n) == brute_quadratic_character(a, n), (a, n)


@given(st.integers(-10**6, 10**6), st.integers(1, 5000))
def test_kronecker_matches_sympy_jacobi(a, m):
    n = 2 * m + 1
    assert kronecker(a, n) == sympy.jacobi_symbol(a, n)


@given(
    st.integers(-1000, 1000),
    st.integers(-1000, 1000),
    st.integers(-300, 300).filter(lambda n: n != 0),
)
def test_kronecker_multiplicative_in_numerator(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


@given(
    st.integers(-1000, 1000),
    st.integers(-200, 200).filter(lambda n: n != 0),
    st.integers(-200, 200).filter(lambda n: n != 0),
)
def test_kronecker_multiplicative_in_denominator(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_factor_examples():
    fm = factor_integer(72)
    assert fm.factors == {2: 3, 3: 2} and fm.complete
    fm = factor_integer(1)
    assert fm.factors == {} and fm.cofactor == 1 and fm.complete
    fm = factor_integer(2**31 - 1)
    assert fm.factors == {2**31 - 1: 1} and fm.complete


@given(st.integers(1, 10**12))
@settings(max_examples=60, deadline=None)
def test_factor_reconstructs(n):
    fm = factor_integer(n)
    assert fm.reconstruct() == n
    assert fm.complete == (fm.cofactor == 1)
    for p in fm.factors:
        assert is_probable_prime(p)
        refac = factor_integer(p)
        assert refac.factors == {p: 1}


def test_factor_budget_exhaustion():
    # product of two ~20-digit primes: rho cannot split it in 100 steps
    p = 2**61 - 1
    q = 2305843009213693967  # next prime after 2^61
    n = p * q
    fm = factor_integer(n, budget=100)
    assert not fm.complete
    assert fm.cofactor == n
    assert fm.reconstruct() == n


def test_factor_perfect_power_of_large_prime():
    p = 1000003
    fm = factor_integer(p**3)
    assert fm.factors == {p: 3} and fm.complete


def test_factor_map_merge():
    a = factor_integer(12)
    b = factor_integer(18)
    assert a.merge(b).reconstruct() == 216


def test_probable_prime_matches_sympy():
    for n in range(2, 3000):
        assert is_probable_prime(n) == sympy.isprime(n)
    # strong pseudoprimes to single bases must still be rejected
    for n in (3215031751, 561, 25326001, 3825123056546413051):
        assert is_probable_prime(n) == sympy.isprime(n)


def test_primes_up_to_matches_sympy():
    assert list(primes_up_to(10**4)) == list(sympy.primerange(2, 10**4 + 1))
    # crosses the segmented-sieve boundary
    assert list(primes_up_to(25000)) == list(sympy.primerange(2, 25001))


def test_hensel_examples():
    assert hensel_sqrt(5, 11, 1) == 4
    assert hensel_sqrt(5, 11, 2) == 48
    assert hensel_sqrt(2, 7, 1) == 3


def test_hensel_lift_tower():
    for d in (2, 3, 5, 13, 17, -7, 101):
        for p in (3, 5, 7, 11, 13, 101, 997):
            if kronecker(d, p) != 1:
                continue
            prev = None
            for k in range(1, 6):
                r = hensel_sqrt(d, p, k)
                assert (r * r - d) % p**k == 0
                if prev is not None:
                    assert r % p ** (k - 1) == prev
                prev = r


def test_hensel_non_residue():
    with pytest.raises(NonResidue):
        hensel_sqrt(5, 3, 1)


def test_v_p():
    assert v_p(72, 2) == 3 and v_p(72, 3) == 2 and v_p(7, 5) == 0
    with pytest.raises(ValueError):
        v_p(0, 3)


def test_factor_deterministic_across_runs():
    n = 10**20 + 39
    assert factor_integer(n).factors == factor_integer(n).factors
