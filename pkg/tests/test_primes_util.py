import math
import random

import pytest

from ternary_squares.primes import (FactorTimeout, divisors_from_factorization,
                                    factorize, is_prime, iter_primes,
                                    pollard_brent, sieve)


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


def test_sieve_matches_trial_division():
    assert sieve(3000) == trial_division_primes(3000)
    assert sieve(1) == []
    assert sieve(2) == [2]


def test_segmented_iteration_matches_sieve():
    assert list(iter_primes(10**5, segment_size=1024)) == sieve(10**5)
    assert list(iter_primes(1)) == []


def test_is_prime_small():
    flags = set(sieve(20000))
    for n in range(20000):
        assert is_prime(n) == (n in flags), n


@pytest.mark.parametrize("n,expected", [
    (2**61 - 1, True),            # Mersenne prime
    (2**89 - 1, True),
    (561, False),                 # Carmichael
    (1105, False),
    (1000000007, True),
    ((2**61 - 1) * (2**31 - 1), False),
])
def test_is_prime_known_values(n, expected):
    assert is_prime(n) == expected


def test_factorize_random_roundtrip():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randrange(2, 10**10)
        factors = factorize(n)
        prod = 1
        for p, e in factors.items():
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_factorize_edges():
    assert factorize(1) == {}
    assert factorize(2**20) == {2: 20}
    assert factorize(600851475143) == {71: 1, 839: 1, 1471: 1, 6857: 1}
    with pytest.raises(ValueError):
        factorize(0)


def test_pollard_brent_semiprime():
    p, q = 1000003, 1000033
    d = pollard_brent(p * q)
    assert d in (p, q)


def test_factor_timeout_raises():
    hard = (2**89 - 1) * (2**107 - 1)
    with pytest.raises(FactorTimeout):
        factorize(hard, timeout_s=0.05)


def test_divisors_from_factorization():
    assert divisors_from_factorization({2: 2, 3: 1}) == [1, 2, 3, 4, 6, 12]
    assert divisors_from_factorization({}) == [1]
