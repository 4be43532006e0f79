import math
import random

import pytest

from ternary_squares.charpoly import discriminant
from ternary_squares.modular import (RAMIFIED, Fp2, ScanBudgetError, char_sum,
                                     classify_prime, count_roots_mod_p,
                                     in_K_y, in_L_y, in_P_fU, in_Z,
                                     period_by_iteration,
                                     period_in_progression, term_mod, v_mod,
                                     z_primes)
from ternary_squares.primes import sieve
from ternary_squares.recurrence import (FIVE_FIB_SQ_MINUS_4, POW2_PLUS_FIB,
                                        TRIBONACCI, RecurrenceSpec, term,
                                        term_iter)

GOOD_PRESETS = (TRIBONACCI, POW2_PLUS_FIB)


def test_term_mod_examples():
    assert term_mod(TRIBONACCI, 7, 7) == 6          # U_7 = 13
    assert term_mod(TRIBONACCI, 10**9, 7) == term_mod(TRIBONACCI, 10**9 % 48, 7)
    assert term_mod(TRIBONACCI, 0, 5) == 0
    assert term_mod(POW2_PLUS_FIB, 0, 7) == 1


def test_term_mod_full_oracle_grid():
    # agreement with exact terms for all n <= 1000, p <= 1000
    for spec in GOOD_PRESETS:
        exact = list(term_iter(spec, 1000))
        for p in sieve(1000):
            residues = [u % p for u in exact]
            for n in range(1001):
                assert term_mod(spec, n, p) == residues[n], (spec, n, p)


def test_count_roots_examples():
    assert count_roots_mod_p(TRIBONACCI, 7) == 1
    assert count_roots_mod_p(TRIBONACCI, 3) == 0
    assert count_roots_mod_p(TRIBONACCI, 11) == RAMIFIED
    assert count_roots_mod_p(TRIBONACCI, 2) == RAMIFIED     # 2 | 44


def brute_root_count(spec, p):
    if discriminant(spec) % p == 0:
        return RAMIFIED
    return sum(1 for x in range(p)
               if (x**3 - spec.a1 * x**2 - spec.a2 * x - spec.a3) % p == 0)


def test_count_roots_frobenius_path_vs_scan():
    rng = random.Random(21)
    specs = list(GOOD_PRESETS)
    for _ in range(6):
        specs.append(RecurrenceSpec(rng.randint(-5, 5), rng.randint(-5, 5),
                                    rng.choice([-3, -1, 1, 2, 5]), 0, 0, 1))
    primes = [p for p in sieve(2000) if p > 1000]  # forces the gcd path
    for spec in specs:
        for p in primes[::3]:
            assert count_roots_mod_p(spec, p) == brute_root_count(spec, p)


def test_in_Z_matches_root_count():
    rng = random.Random(22)
    specs = list(GOOD_PRESETS) + [
        RecurrenceSpec(rng.randint(-5, 5), rng.randint(-5, 5),
                       rng.choice([-3, -1, 1, 2, 5]), 0, 0, 1)
        for _ in range(5)]
    for spec in specs:
        for p in sieve(500):
            expected = (p != 2 and spec.a3 % p != 0
                        and count_roots_mod_p(spec, p) == 1)
            assert in_Z(spec, p) == expected, (spec, p)


def test_z_primes_examples():
    assert list(z_primes(TRIBONACCI, 13)) == [7, 13]
    assert list(z_primes(TRIBONACCI, 6)) == []
    assert list(z_primes(POW2_PLUS_FIB, 30)) == [3, 7, 13, 17, 23]


def test_classify_prime_tribonacci_7():
    prof = classify_prime(TRIBONACCI, 7)
    assert prof.in_Z and prof.root_count == 1
    assert prof.alpha == 3
    assert prof.ord_alpha == 6
    assert prof.ord_ratio == 8
    assert prof.k_p == 48
    assert prof.t_p == 48
    assert prof.mult_order == 3


def test_classify_prime_other_examples():
    assert classify_prime(TRIBONACCI, 13).alpha == 7
    prof = classify_prime(TRIBONACCI, 3)
    assert prof.root_count == 0 and not prof.in_Z
    assert prof.k_p is None


def test_classify_prime_rejects_bad_inputs():
    with pytest.raises(ValueError):
        classify_prime(TRIBONACCI, 2)
    with pytest.raises(ValueError):
        classify_prime(POW2_PLUS_FIB, 2)      # p | a3 as well
    with pytest.raises(ValueError):
        classify_prime(RecurrenceSpec(1, 1, 5, 0, 0, 1), 5)
    with pytest.raises(ValueError):
        classify_prime(TRIBONACCI, 9)


def test_period_divisor_method_matches_iteration():
    rng = random.Random(23)
    specs = list(GOOD_PRESETS) + [
        RecurrenceSpec(rng.randint(-4, 4), rng.randint(-4, 4),
                       rng.choice([-3, -1, 1, 3]),
                       rng.randint(-3, 3), rng.randint(-3, 3),
                       rng.choice([1, 2, 3])) for _ in range(5)]
    for spec in specs:
        for p in sieve(60):
            if p == 2 or spec.a3 % p == 0:
                continue
            assert classify_prime(spec, p).t_p == period_by_iteration(spec, p), \
                (spec, p)


def test_ramified_profile_has_period():
    prof = classify_prime(TRIBONACCI, 11)
    assert prof.root_count == RAMIFIED
    assert prof.t_p == period_by_iteration(TRIBONACCI, 11)


def test_fp2_arithmetic():
    # cofactor of the tribonacci cubic at p = 7 is X^2 + 2X + 5
    fld = Fp2(7, 2, 5)
    beta = (0, 1)
    rng = random.Random(24)
    for _ in range(50):
        x = (rng.randrange(7), rng.randrange(7))
        if x == (0, 0):
            continue
        assert fld.pow(x, 7 * 7 - 1) == fld.one                 # group order
        assert fld.mul(x, fld.inv(x)) == fld.one
    # Frobenius swaps the conjugate roots
    assert fld.pow(beta, 7) == fld.conj(beta)
    # beta * gamma equals the cofactor constant term
    assert fld.mul(beta, fld.conj(beta)) == (5, 0)


def test_frobenius_swap_many_primes():
    for spec in GOOD_PRESETS:
        for p in z_primes(spec, 300):
            prof = classify_prime(spec, p)
            b = (prof.alpha - spec.a1) % p
            c = (prof.alpha**2 - spec.a1 * prof.alpha - spec.a2) % p
            fld = Fp2(p, b, c)
            assert fld.pow((0, 1), p) == fld.conj((0, 1)), (spec, p)


def test_v_mod_examples_and_oracle():
    assert v_mod(TRIBONACCI, 7, 1) == 6     # V_1 = U_7 = 13 = 6 mod 7
    assert v_mod(TRIBONACCI, 7, 0) == 0
    prof = classify_prime(TRIBONACCI, 7, )
    for m in range(40):
        assert v_mod(TRIBONACCI, 7, m, prof) == term(TRIBONACCI, 7 * m) % 7
    seq = [v_mod(TRIBONACCI, 7, m, prof) for m in range(1, 97)]
    assert seq[:48] == seq[48:]             # period divides 48


def test_v_mod_requires_Z_membership():
    with pytest.raises(ValueError):
        v_mod(TRIBONACCI, 3, 1)


def test_char_sum_values():
    s = char_sum(TRIBONACCI, 7, 0, 1)
    assert abs(s) <= 6 * 7
    # independent recomputation from exact terms over one period
    word = [term(TRIBONACCI, 7 * k) % 7 for k in range(1, 49)]
    expect = 0
    for w in word:
        if w != 0:
            expect += 1 if pow(w, 3, 7) == 1 else -1
    assert s == expect
    s13 = char_sum(TRIBONACCI, 13, 0, 1)
    assert abs(s13) <= 6 * 13


def test_char_sum_constant_subsequence():
    prof = classify_prime(TRIBONACCI, 7)
    assert abs(char_sum(TRIBONACCI, 7, 0, prof.t_p, prof)) <= 1


def test_period_in_progression():
    assert period_in_progression(TRIBONACCI, 7, 0, 1) == \
        {"t_cdp": 48, "matches_formula": True}
    assert period_in_progression(TRIBONACCI, 7, 0, 48) == \
        {"t_cdp": 1, "matches_formula": True}
    assert period_in_progression(TRIBONACCI, 7, 1, 2) == \
        {"t_cdp": 24, "matches_formula": True}
    with pytest.raises(ValueError):
        period_in_progression(TRIBONACCI, 7, 2, 2)


def test_progression_periods_match_formula_sample():
    for p in z_primes(TRIBONACCI, 60):
        prof = classify_prime(TRIBONACCI, p)
        for d in (1, 2, 3, 5):
            for c in range(min(d, 3)):
                r = period_in_progression(TRIBONACCI, p, c, d, prof)
                assert r["t_cdp"] == prof.t_p // math.gcd(d, prof.t_p), (p, c, d)


def test_order_threshold_sets():
    prof = classify_prime(TRIBONACCI, 7)
    assert in_K_y(TRIBONACCI, 7, 6, prof)
    assert not in_K_y(TRIBONACCI, 7, 5, prof)
    assert in_L_y(TRIBONACCI, 7, 8, prof)
    assert not in_L_y(TRIBONACCI, 7, 7.5, prof)
    with pytest.raises(ValueError):
        in_K_y(TRIBONACCI, 3, 10)


def test_in_P_fU_against_brute_zeros():
    zeros = [m for m in range(1, 97) if term(TRIBONACCI, 7 * m) % 7 == 0]
    found, witness = in_P_fU(TRIBONACCI, 7, 48)
    # brute expectation: a run of 7 zero positions with span <= 48
    expect = any(zeros[i + 6] - zeros[i] <= 48 for i in range(len(zeros) - 6))
    assert found == expect
    if found:
        assert len(witness) == 7
        assert witness[6] - witness[0] <= 48
        assert all(term(TRIBONACCI, 7 * m) % 7 == 0 for m in witness)


def test_in_P_fU_span_too_small():
    found, witness = in_P_fU(TRIBONACCI, 7, 1)
    assert not found and witness is None


def test_in_P_fU_outside_Z():
    # p = 3 has no roots; the generic stepped scan must still work
    found, witness = in_P_fU(TRIBONACCI, 3, 13)
    zeros = [m for m in range(1, 27) if term(TRIBONACCI, 3 * m) % 3 == 0]
    expect = any(zeros[i + 6] - zeros[i] <= 13 for i in range(len(zeros) - 6))
    assert found == expect


def test_in_P_fU_bad_inputs():
    with pytest.raises(ValueError):
        in_P_fU(TRIBONACCI, 2, 5)
    with pytest.raises(ValueError):
        in_P_fU(POW2_PLUS_FIB, 2, 5)
    with pytest.raises(ValueError):
        in_P_fU(TRIBONACCI, 7, 0)


def test_scan_budget_errors():
    with pytest.raises(ScanBudgetError):
        period_by_iteration(TRIBONACCI, 97, max_states=10)
    with pytest.raises(ScanBudgetError):
        char_sum(TRIBONACCI, 13, 0, 1, max_states=10)    # t(13) = 168


def test_lemma5_divisibilities_small_sweep():
    for spec in GOOD_PRESETS:
        d = discriminant(spec)
        for p in z_primes(spec, 2000):
            if (2 * spec.a3 * d) % p == 0:
                continue
            prof = classify_prime(spec, p)
            assert (p - 1) % prof.ord_alpha == 0, (spec, p)
            assert (p + 1) % prof.ord_ratio == 0, (spec, p)
            assert prof.k_p % prof.t_p == 0, (spec, p)
            if prof.t_p == prof.k_p:
                o = prof.ord_alpha * prof.ord_ratio
                assert (2 * prof.t_p) % o == 0
                assert (8 * o) % (2 * prof.t_p) == 0
                assert (8 * (p - 1) * (p + 1)) % (8 * o) == 0
            if p > 100:
                assert prof.t_p == prof.k_p, (spec, p)


def test_multiplier_group_divisibility():
    # a3 = +-1 forces multiplier^3 = +-1; cofactor constant +-1 forces
    # multiplier^2 = +-1
    for p in z_primes(TRIBONACCI, 1000):
        prof = classify_prime(TRIBONACCI, p)
        assert 6 % prof.mult_order == 0, p
    for spec in (POW2_PLUS_FIB, FIVE_FIB_SQ_MINUS_4):
        for p in z_primes(spec, 1000):
            prof = classify_prime(spec, p)
            assert 4 % prof.mult_order == 0, (spec, p)
