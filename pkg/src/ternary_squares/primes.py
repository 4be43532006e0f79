"""Prime sieves, primality testing and integer factorization.

Everything here is deterministic: Miller-Rabin uses a fixed base set below
the proven 64-bit-plus threshold and a fixed-seed PRNG above it, and
Pollard-Brent walks a fixed parameter schedule.
"""

import math
import random
import time
from itertools import count

# Deterministic Miller-Rabin bases valid for n < 3,317,044,064,679,887,385,961,981.
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_EXTRA_ROUNDS = 64
_MR_SEED = 0x5EED


class FactorTimeout(Exception):
    """Raised when factorization exceeds its time budget."""


def sieve(limit):
    """Return the list of primes <= limit (simple Eratosthenes)."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start:limit + 1:p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i, f in enumerate(flags) if f]


def iter_primes(limit, segment_size=1 << 20):
    """Yield primes <= limit in increasing order using a segmented sieve.

    Memory stays O(sqrt(limit) + segment_size) regardless of limit.
    """
    if limit < 2:
        return
    root = math.isqrt(limit)
    base = sieve(root)
    yield from (p for p in base if p <= limit)
    low = root + 1
    while low <= limit:
        high = min(low + segment_size - 1, limit)
        flags = bytearray([1]) * (high - low + 1)
        for p in base:
            start = max(p * p, ((low + p - 1) // p) * p)
            flags[start - low::p] = b"\x00" * ((high - start) // p + 1)
        for i, f in enumerate(flags):
            if f:
                yield low + i
        low = high + 1


def _miller_rabin_witness(a, d, s, n):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True  # a witnesses compositeness


def is_prime(n):
    """Miller-Rabin primality test, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if _miller_rabin_witness(a, d, s, n):
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        return True
    rng = random.Random(_MR_SEED ^ n)
    for _ in range(_MR_EXTRA_ROUNDS):
        a = rng.randrange(2, n - 1)
        if _miller_rabin_witness(a, d, s, n):
            return False
    return True


def pollard_brent(n, deadline=None):
    """Return a nontrivial factor of composite n (Brent's cycle variant).

    Walks a fixed (y, c) schedule so results are reproducible. `deadline`
    is an absolute time.monotonic() limit; exceeding it raises FactorTimeout.
    """
    if n % 2 == 0:
        return 2
    if n % 3 == 0:
        return 3
    for attempt in count(1):
        y, c, m = (attempt * 2 + 1) % n, (attempt * 2021 + 1) % n, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            if deadline is not None and time.monotonic() > deadline:
                raise FactorTimeout(f"factoring {n} exceeded its time budget")
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # rare cycle failure: retry with the next parameter pair


_SMALL_PRIME_CACHE = sieve(10_000)


def factorize(n, timeout_s=None):
    """Factor n >= 1 into {prime: exponent}.

    Trial division by cached small primes, then Miller-Rabin +
    Pollard-Brent on the remaining cofactor (Brent disposes of any factor
    below ~10^12 immediately, so the small cache loses nothing over a
    10^6 trial bound). Raises FactorTimeout if `timeout_s` elapses first.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    deadline = None if timeout_s is None else time.monotonic() + timeout_s
    factors = {}
    for p in _SMALL_PRIME_CACHE:
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    if n == 1:
        return factors
    if n < _SMALL_PRIME_CACHE[-1] ** 2 or is_prime(n):
        factors[n] = factors.get(n, 0) + 1
        return factors
    stack = [n]
    while stack:
        m = stack.pop()
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = pollard_brent(m, deadline)
        stack.append(d)
        stack.append(m // d)
    return factors


def divisors_from_factorization(factors):
    """All positive divisors, ascending, from a {prime: exponent} map."""
    divs = [1]
    for p, e in factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
