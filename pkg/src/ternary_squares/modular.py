"""Everything modulo p: fast terms, root counting, prime classification,
periods, element orders in F_p and F_p^2, multiplier groups, the
Frobenius-reduced companion sequence V, character sums over it, and the
order/zero-pattern membership tests.

Terminology used throughout: for a prime p at which the characteristic
cubic has exactly one root (the set Z), `alpha` is that root in F_p and
`beta`, `gamma` are the conjugate roots of the quadratic cofactor in
F_p^2, swapped by x -> x^p.
"""

import math
from dataclasses import dataclass

from .charpoly import char_poly, discriminant
from .primes import factorize, is_prime, iter_primes
from .sqrtmod import legendre, tonelli_shanks

DEFAULT_SCAN_STATES = 10**8

RAMIFIED = "ramified"


class ScanBudgetError(Exception):
    """A period or zero scan would exceed the configured state budget."""


# ---------------------------------------------------------------------------
# companion-matrix and polynomial arithmetic mod p

def _companion(spec, p):
    a1, a2, a3 = spec.coefficients
    return (0, 1, 0,
            0, 0, 1,
            a3 % p, a2 % p, a1 % p)


def _mat_mul(x, y, p):
    x0, x1, x2, x3, x4, x5, x6, x7, x8 = x
    y0, y1, y2, y3, y4, y5, y6, y7, y8 = y
    return ((x0 * y0 + x1 * y3 + x2 * y6) % p,
            (x0 * y1 + x1 * y4 + x2 * y7) % p,
            (x0 * y2 + x1 * y5 + x2 * y8) % p,
            (x3 * y0 + x4 * y3 + x5 * y6) % p,
            (x3 * y1 + x4 * y4 + x5 * y7) % p,
            (x3 * y2 + x4 * y5 + x5 * y8) % p,
            (x6 * y0 + x7 * y3 + x8 * y6) % p,
            (x6 * y1 + x7 * y4 + x8 * y7) % p,
            (x6 * y2 + x7 * y5 + x8 * y8) % p)


_MAT_ONE = (1, 0, 0, 0, 1, 0, 0, 0, 1)


def _mat_pow(m, e, p):
    out = tuple(v % p for v in _MAT_ONE)
    while e:
        if e & 1:
            out = _mat_mul(out, m, p)
        m = _mat_mul(m, m, p)
        e >>= 1
    return out


def _mat_vec(m, v, p):
    v0, v1, v2 = v
    return ((m[0] * v0 + m[1] * v1 + m[2] * v2) % p,
            (m[3] * v0 + m[4] * v1 + m[5] * v2) % p,
            (m[6] * v0 + m[7] * v1 + m[8] * v2) % p)


def _reduction_rows(spec, p):
    """X^3 and X^4 reduced modulo the characteristic cubic, coefficients
    (c0, c1, c2) for c0 + c1*X + c2*X^2."""
    a1, a2, a3 = spec.coefficients
    r3 = (a3 % p, a2 % p, a1 % p)
    r4 = ((a1 * a3) % p, (a1 * a2 + a3) % p, (a1 * a1 + a2) % p)
    return r3, r4


def _polymulmod(u, v, p, r3, r4):
    u0, u1, u2 = u
    v0, v1, v2 = v
    t3 = u1 * v2 + u2 * v1
    t4 = u2 * v2
    return ((u0 * v0 + t3 * r3[0] + t4 * r4[0]) % p,
            (u0 * v1 + u1 * v0 + t3 * r3[1] + t4 * r4[1]) % p,
            (u0 * v2 + u1 * v1 + u2 * v0 + t3 * r3[2] + t4 * r4[2]) % p)


def _x_pow(spec, e, p):
    """X^e modulo (characteristic cubic, p) as coefficients (c0, c1, c2)."""
    r3, r4 = _reduction_rows(spec, p)
    out = (1 % p, 0, 0)
    base = (0, 1 % p, 0)
    while e:
        if e & 1:
            out = _polymulmod(out, base, p, r3, r4)
        base = _polymulmod(base, base, p, r3, r4)
        e >>= 1
    return out


def term_mod(spec, n, p):
    """U_n mod p in O(log n) multiplications.

    X^n reduced modulo the characteristic cubic gives coefficients c_i
    with U_n = c0*U_0 + c1*U_1 + c2*U_2 (mod p).
    """
    if p < 2:
        raise ValueError("modulus must be >= 2")
    if n < 0:
        raise ValueError("n must be nonnegative")
    u = [x % p for x in spec.initial_terms]
    if n < 3:
        return u[n]
    c0, c1, c2 = _x_pow(spec, n, p)
    return (c0 * u[0] + c1 * u[1] + c2 * u[2]) % p


# ---------------------------------------------------------------------------
# root counting mod p

def _poly_divmod_modp(f, g, p):
    """f, g ascending coefficient lists over F_p, g nonzero; returns (q, r)."""
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    g = [c % p for c in g]
    while g and g[-1] == 0:
        g.pop()
    inv = pow(g[-1], -1, p)
    q = [0] * max(1, len(f) - len(g) + 1)
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        coef = f[-1] * inv % p
        q[k] = coef
        for i, gc in enumerate(g):
            f[i + k] = (f[i + k] - coef * gc) % p
        while f and f[-1] == 0:
            f.pop()
    return q, f or [0]


def _poly_gcd_modp(f, g, p):
    f = [c % p for c in f]
    g = [c % p for c in g]
    while any(g):
        _, r = _poly_divmod_modp(f, g, p)
        f, g = g, r
    while f and f[-1] == 0:
        f.pop()
    return f or [0]


def count_roots_mod_p(spec, p):
    """Number of distinct roots of the characteristic cubic in F_p:
    0, 1, 3, or "ramified" when p divides the discriminant.

    Small p are scanned directly; larger p use the Frobenius criterion
    deg gcd(X^p - X, Psi) with X^p computed by repeated squaring mod Psi.
    """
    if discriminant(spec) % p == 0:
        return RAMIFIED
    psi = char_poly(spec)
    if p < 1000:
        return sum(1 for x in range(p)
                   if (((x * x * x - spec.a1 * x * x - spec.a2 * x - spec.a3)
                        % p) == 0))
    xp = _x_pow(spec, p, p)
    if xp == (0, 1, 0):
        return 3
    g = _poly_gcd_modp([xp[0], (xp[1] - 1) % p, xp[2]], psi, p)
    return len(g) - 1


def _roots_mod_p(spec, p):
    """All distinct roots of the characteristic cubic in F_p."""
    if p < 1000:
        return [x for x in range(p)
                if (x * x * x - spec.a1 * x * x - spec.a2 * x - spec.a3) % p == 0]
    xp = _x_pow(spec, p, p)
    if xp == (0, 1, 0):
        g = [c % p for c in char_poly(spec)]
    else:
        g = _poly_gcd_modp([xp[0], (xp[1] - 1) % p, xp[2]], char_poly(spec), p)
    return sorted(_roots_of_split_poly(g, p))


def _roots_of_split_poly(g, p):
    """Roots of a monic-izable polynomial of degree <= 3 over F_p that is
    known to split into distinct linear factors."""
    deg = len(g) - 1
    if deg <= 0:
        return []
    inv = pow(g[-1], -1, p)
    g = [c * inv % p for c in g]
    if deg == 1:
        return [(-g[0]) % p]
    if deg == 2:
        disc = (g[1] * g[1] - 4 * g[0]) % p
        s = tonelli_shanks(disc, p)
        assert s is not None, "split quadratic must have a square discriminant"
        inv2 = pow(2, -1, p)
        return [(-g[1] + s) * inv2 % p, (-g[1] - s) * inv2 % p]
    # cubic splitting: probe gcd((X+a)^((p-1)/2) - 1, g) over a fixed schedule
    for a in range(p):
        h = _shifted_half_pow(g, a, p)
        h[0] = (h[0] - 1) % p
        d = _poly_gcd_modp(h, g, p)
        if 0 < len(d) - 1 < 3:
            rest, rem = _poly_divmod_modp(g, d, p)
            assert rem == [0]
            return _roots_of_split_poly(d, p) + _roots_of_split_poly(rest, p)
    raise AssertionError("cubic splitting failed to find a separating shift")


def _shifted_half_pow(g, a, p):
    """(X + a)^((p-1)/2) reduced mod g, ascending list of length deg(g)."""
    deg = len(g) - 1
    out = [1] + [0] * (deg - 1)
    base = [a % p, 1] + [0] * (deg - 2)
    e = (p - 1) // 2
    while e:
        if e & 1:
            out = _polymul_mod_generic(out, base, g, p)
        base = _polymul_mod_generic(base, base, g, p)
        e >>= 1
    return out


def _polymul_mod_generic(u, v, g, p):
    prod = [0] * (len(u) + len(v) - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                prod[i + j] = (prod[i + j] + ui * vj) % p
    _, r = _poly_divmod_modp(prod, g, p)
    r = list(r) + [0] * (len(g) - 1 - len(r))
    return r[:len(g) - 1]


# ---------------------------------------------------------------------------
# F_p^2 on the quadratic cofactor

class Fp2:
    """F_p[t]/(t^2 + B t + C) with t the image of beta; elements are (a, b)
    pairs meaning a + b*t. C is the norm of t, so invertibility needs
    p not dividing the constant term of the cofactor."""

    def __init__(self, p, B, C):
        self.p = p
        self.B = B % p
        self.C = C % p
        self.one = (1, 0)

    def mul(self, x, y):
        p, B, C = self.p, self.B, self.C
        a, b = x
        c, d = y
        bd = b * d
        return ((a * c - bd * C) % p, (a * d + b * c - bd * B) % p)

    def conj(self, x):
        a, b = x
        return ((a - b * self.B) % self.p, -b % self.p)

    def norm(self, x):
        a, b = x
        return (a * a - a * b * self.B + b * b * self.C) % self.p

    def inv(self, x):
        n_inv = pow(self.norm(x), -1, self.p)
        a, b = self.conj(x)
        return (a * n_inv % self.p, b * n_inv % self.p)

    def pow(self, x, e):
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out


def _merge_factorizations(*maps):
    out = {}
    for m in maps:
        for q, e in m.items():
            out[q] = out.get(q, 0) + e
    return out


def _element_order(pow_to, multiple, multiple_factors):
    """Smallest divisor t of `multiple` with pow_to(t) true.

    pow_to(multiple) is verified, not assumed: the order sweeps rely on
    these extractions to surface any failure of the claimed p-1 / p+1 /
    p^2-1 divisibilities rather than silently returning a wrong order.
    """
    if not pow_to(multiple):
        raise ArithmeticError(
            f"element order does not divide the claimed multiple {multiple}")
    t = multiple
    for q in multiple_factors:
        while t % q == 0 and pow_to(t // q):
            t //= q
    return t


def _restrict_factors(n, factor_map):
    """Factorization of n given that every prime of n appears in factor_map."""
    out = {}
    for q in factor_map:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    assert n == 1, "divisor had a prime outside the reference factorization"
    return out


# ---------------------------------------------------------------------------
# prime classification


@dataclass(frozen=True)
class PrimeProfile:
    p: int
    root_count: object          # 0, 1, 3, or "ramified"
    in_Z: bool
    alpha: int | None = None
    t_p: int | None = None
    k_p: int | None = None
    ord_alpha: int | None = None
    ord_ratio: int | None = None
    mult_order: int | None = None


def _state_period(spec, p, multiple, multiple_factors):
    """Smallest k dividing `multiple` with M^k s0 = s0 for the companion
    matrix M and initial state s0; requires M^multiple s0 = s0."""
    s0 = tuple(x % p for x in spec.initial_terms)
    if s0 == (0, 0, 0):
        return 1
    m = _companion(spec, p)
    assert _mat_vec(_mat_pow(m, multiple, p), s0, p) == s0, \
        "claimed period multiple does not fix the initial state"
    return _element_order(
        lambda k: _mat_vec(_mat_pow(m, k, p), s0, p) == s0,
        multiple, multiple_factors)


def classify_prime(spec, p):
    """Full profile for an odd prime p not dividing a3.

    Primes in Z get every field: the F_p root alpha, the period t_p of
    the sequence mod p, the joint root order k_p, the orders of alpha and
    beta/gamma, and the multiplier-group order k_p / n0. Ramified primes
    and primes with 0 or 3 roots get a reduced profile (root count and
    period only).
    """
    if p == 2:
        raise ValueError("p = 2 is excluded from classification")
    if spec.a3 % p == 0:
        raise ValueError(f"p = {p} divides a3; the sequence mod p is not purely periodic")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")

    rc = count_roots_mod_p(spec, p)
    fac_p1 = factorize(p - 1)

    if rc == RAMIFIED:
        multiple = p * (p - 1)
        t_p = _state_period(spec, p, multiple,
                            _merge_factorizations(fac_p1, {p: 1}))
        return PrimeProfile(p=p, root_count=rc, in_Z=False, t_p=t_p)

    if rc == 3:
        roots = _roots_mod_p(spec, p)
        k_p = 1
        for r in roots:
            k_p = math.lcm(k_p, _element_order(
                lambda e, r=r: pow(r, e, p) == 1, p - 1, fac_p1))
        t_p = _state_period(spec, p, k_p, _restrict_factors(k_p, fac_p1))
        return PrimeProfile(p=p, root_count=3, in_Z=False, t_p=t_p)

    if rc == 0:
        # roots live in F_p^3; all three are conjugate with a common order
        fac = _merge_factorizations(fac_p1, factorize(p * p + p + 1))

        def x_to(e):
            return _x_pow(spec, e, p) == (1, 0, 0)

        k_p = _element_order(x_to, p**3 - 1, fac)
        t_p = _state_period(spec, p, k_p, _restrict_factors(k_p, fac))
        return PrimeProfile(p=p, root_count=0, in_Z=False, t_p=t_p)

    # exactly one root: p is in Z
    alpha = _roots_mod_p(spec, p)[0]
    B = (alpha - spec.a1) % p
    C = (alpha * alpha - spec.a1 * alpha - spec.a2) % p
    fld = Fp2(p, B, C)
    fac_q1 = factorize(p + 1)
    fac_p2 = _merge_factorizations(fac_p1, fac_q1)

    ord_alpha = _element_order(lambda e: pow(alpha, e, p) == 1, p - 1, fac_p1)
    beta = (0, 1)
    ord_beta = _element_order(lambda e: fld.pow(beta, e) == fld.one,
                              p * p - 1, fac_p2)
    ratio = fld.mul(beta, fld.inv(fld.conj(beta)))  # beta / gamma, norm 1
    ord_ratio = _element_order(lambda e: fld.pow(ratio, e) == fld.one,
                               p + 1, fac_q1)
    ab = fld.mul((alpha % p, 0), fld.inv(beta))     # alpha / beta
    ord_ab = _element_order(lambda e: fld.pow(ab, e) == fld.one,
                            p * p - 1, fac_p2)
    k_p = math.lcm(ord_alpha, ord_beta)
    n0 = math.lcm(ord_ab, ord_ratio)                # least n with equal powers
    assert k_p % n0 == 0
    t_p = _state_period(spec, p, k_p, _restrict_factors(k_p, fac_p2))
    return PrimeProfile(p=p, root_count=1, in_Z=True, alpha=alpha, t_p=t_p,
                        k_p=k_p, ord_alpha=ord_alpha, ord_ratio=ord_ratio,
                        mult_order=k_p // n0)


def in_Z(spec, p):
    """Membership of p in Z: odd, unramified, coprime to a3, exactly one
    root mod p. Decided by one Legendre symbol of the discriminant
    (Frobenius parity), which agrees with the root count."""
    d = discriminant(spec)
    if p == 2 or d % p == 0 or spec.a3 % p == 0:
        return False
    return legendre(d, p) == -1


def z_primes(spec, x):
    """Yield the primes p <= x in Z, increasing, by segmented enumeration."""
    if x < 3:
        return
    d = discriminant(spec)
    a3 = spec.a3
    for p in iter_primes(x):
        if p == 2 or d % p == 0 or a3 % p == 0:
            continue
        if legendre(d, p) == -1:
            yield p


def period_by_iteration(spec, p, max_states=DEFAULT_SCAN_STATES):
    """t_p by direct state cycling; oracle for the divisor-based method."""
    s0 = tuple(x % p for x in spec.initial_terms)
    a1, a2, a3 = (c % p for c in spec.coefficients)
    x, y, z = s0
    for k in range(1, max_states + 1):
        x, y, z = y, z, (a1 * z + a2 * y + a3 * x) % p
        if (x, y, z) == s0:
            return k
    raise ScanBudgetError(f"no period within {max_states} states for p={p}")


# ---------------------------------------------------------------------------
# the reduced sequence V and sums over it

def _require_in_Z(profile):
    if not profile.in_Z:
        raise ValueError(f"p = {profile.p} is not in Z")


def _profile(spec, p, profile):
    return profile if profile is not None else classify_prime(spec, p)


def v_mod(spec, p, m, profile=None):
    """V_m mod p, i.e. U_{p*m} mod p, for p in Z (index reduced mod t_p)."""
    prof = _profile(spec, p, profile)
    _require_in_Z(prof)
    return term_mod(spec, (p % prof.t_p) * (m % prof.t_p) % prof.t_p, p)


def _v_values_one_period(spec, p, prof, max_states):
    """All of V_0 .. V_{t-1} where t is the state period of V mod p.

    V satisfies the same recurrence as U mod p (the Frobenius permutes
    the characteristic roots), so one modular stepping pass suffices.
    """
    t = prof.t_p
    s0 = (term_mod(spec, 0, p),
          term_mod(spec, p % t, p),
          term_mod(spec, (2 * p) % t, p))
    a1, a2, a3 = (c % p for c in spec.coefficients)
    values = []
    x, y, z = s0
    for _ in range(max_states + 1):
        values.append(x)
        x, y, z = y, z, (a1 * z + a2 * y + a3 * x) % p
        if (x, y, z) == s0:
            return values
    raise ScanBudgetError(
        f"V period for p={p} exceeds the {max_states}-state budget")


def _minimal_word_period(word):
    """Smallest t dividing len(word) with word[i] == word[(i+t) % len]."""
    n = len(word)
    for t in sorted(d for k in range(1, math.isqrt(n) + 1) if n % k == 0
                    for d in (k, n // k)):
        if all(word[i] == word[(i + t) % n] for i in range(n)):
            return t
    return n


def _progression_word(spec, p, c, d, profile, max_states):
    """One full period of the subsequence V_{c+dk}, k = 1, 2, ...."""
    if not 0 <= c < d:
        raise ValueError("need 0 <= c < d")
    prof = _profile(spec, p, profile)
    _require_in_Z(prof)
    values = _v_values_one_period(spec, p, prof, max_states)
    t_v = len(values)
    state_period = t_v // math.gcd(d, t_v)
    word = [values[(c + d * (k + 1)) % t_v] for k in range(state_period)]
    return word, _minimal_word_period(word), prof


def char_sum(spec, p, c, d, profile=None, max_states=DEFAULT_SCAN_STATES):
    """Sum of Legendre symbols (V_{c+dk} / p) over k = 1 .. t_{c,d,p},
    where t_{c,d,p} is the minimal period of that subsequence; zero terms
    contribute zero."""
    word, t_cdp, _ = _progression_word(spec, p, c, d, profile, max_states)
    return sum(legendre(w, p) for w in word[:t_cdp])


def period_in_progression(spec, p, c, d, profile=None,
                          max_states=DEFAULT_SCAN_STATES):
    """{"t_cdp", "matches_formula"}: the observed minimal period of
    V_{c+dk} versus the generic value t_p / gcd(d, t_p)."""
    word, t_cdp, prof = _progression_word(spec, p, c, d, profile, max_states)
    return {"t_cdp": t_cdp,
            "matches_formula": t_cdp == prof.t_p // math.gcd(d, prof.t_p)}


def in_K_y(spec, p, y, profile=None):
    """p in K_y: the order of alpha mod p is at most y (p must be in Z)."""
    prof = _profile(spec, p, profile)
    _require_in_Z(prof)
    return prof.ord_alpha <= y


def in_L_y(spec, p, y, profile=None):
    """p in L_y: the order of beta/gamma is at most y (p must be in Z)."""
    prof = _profile(spec, p, profile)
    _require_in_Z(prof)
    return prof.ord_ratio <= y


def in_P_fU(spec, p, f_p, profile=None, max_states=DEFAULT_SCAN_STATES):
    """Does U_{p*m} vanish mod p at 7 indices m_1 < ... < m_7 with
    m_7 - m_1 <= f_p?  Returns (flag, witness indices or None).

    Scans m in [1, t + f_p] where t is the period of {U_{pm}}_m mod p;
    periodicity makes that window exhaustive.
    """
    if p == 2 or spec.a3 % p == 0:
        raise ValueError("need odd p not dividing a3")
    if f_p < 1:
        raise ValueError("f_p must be positive")
    if in_Z(spec, p):
        prof = _profile(spec, p, profile)
        values = _v_values_one_period(spec, p, prof, max_states)
    else:
        values = _stepped_values_one_period(spec, p, max_states)
    t = len(values)
    zeros = [m for m in range(1, t + 1) if values[m % t] == 0]
    zeros += [z + t for z in zeros if z <= f_p]
    for i in range(len(zeros) - 6):
        if zeros[i + 6] - zeros[i] <= f_p:
            return True, tuple(zeros[i:i + 7])
    return False, None


def _stepped_values_one_period(spec, p, max_states):
    """U_{p*m} mod p for one full state period of m -> state(p*m)."""
    step = _mat_pow(_companion(spec, p), p, p)
    s0 = tuple(x % p for x in spec.initial_terms)
    values = []
    s = s0
    for _ in range(max_states + 1):
        values.append(s[0])
        s = _mat_vec(step, s, p)
        if s == s0:
            return values
    raise ScanBudgetError(
        f"stepped period for p={p} exceeds the {max_states}-state budget")
