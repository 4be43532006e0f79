import math
import random

import pytest

from ternary_squares.representation import (Member, NonMember, Obstructed,
                                            Unknown, classify_range,
                                            count_range, integer_sqrt,
                                            membership, qr_obstruction,
                                            represent, status_name)
from ternary_squares.recurrence import (FIVE_FIB_SQ_MINUS_4, POW2_PLUS_N,
                                        SQUARE_POW, TRIBONACCI,
                                        RecurrenceSpec, fibonacci, lucas,
                                        term)


def brute_representable(n_big, n):
    for v in range(math.isqrt(n_big // n) + 1):
        rest = n_big - n * v * v
        r = math.isqrt(rest)
        if r * r == rest:
            return True
    return False


def test_integer_sqrt():
    assert integer_sqrt(25) == (5, True)
    assert integer_sqrt(26) == (5, False)
    assert integer_sqrt(2**128) == (2**64, True)
    assert integer_sqrt(0) == (0, True)
    with pytest.raises(ValueError):
        integer_sqrt(-1)


def test_represent_examples():
    assert represent(233, 13) == Member(5, 4)    # F_13 = 233
    assert represent(0, 5) == Member(0, 0)
    assert represent(13, 7) == NonMember()
    assert represent(4, 5) == Member(2, 0)


def test_represent_enumeration_oracle():
    for n_big in range(0, 1200):
        for n in range(1, 25):
            got = represent(n_big, n)
            assert isinstance(got, Member) == brute_representable(n_big, n)
            if isinstance(got, Member):
                assert got.u**2 + n * got.v**2 == n_big


def test_cornacchia_tier_differential():
    rng = random.Random(31)
    for _ in range(500):
        n_big = rng.randrange(1, 10**6)
        n = rng.randrange(1, 60)
        got = represent(n_big, n, enum_limit=0)    # force the cornacchia tier
        assert isinstance(got, Member) == brute_representable(n_big, n), (n_big, n)
        if isinstance(got, Member):
            assert got.u**2 + n * got.v**2 == n_big


def test_cornacchia_edge_shapes():
    # pure square, n*y^2, square divisors, prime powers dividing n
    assert isinstance(represent(16, 3, enum_limit=0), Member)       # 4^2
    assert isinstance(represent(63, 7, enum_limit=0), Member)       # 7*9
    assert isinstance(represent(4 * 233, 13, enum_limit=0), Member)  # 2*(5,4)
    assert isinstance(represent(7, 7, enum_limit=0), Member)        # (0,1)
    assert isinstance(represent(49, 7, enum_limit=0), Member)       # (7,0)
    got = represent(2**10 * 3, 5, enum_limit=0)
    assert isinstance(got, Member) == brute_representable(2**10 * 3, 5)


def test_fibonacci_prime_representations():
    for p in (5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97, 101):
        f_p = fibonacci(p)
        got = represent(f_p, p)
        assert isinstance(got, Member), (p, f_p)
        assert got.u**2 + p * got.v**2 == f_p


def test_represent_unknown_on_factor_timeout():
    hard = (2**89 - 1) * (2**107 - 1)   # 59-digit semiprime
    got = represent(hard, 3, enum_limit=0, factor_timeout_s=0.05)
    assert got == Unknown()


def test_represent_input_validation():
    with pytest.raises(ValueError):
        represent(-1, 3)
    with pytest.raises(ValueError):
        represent(5, 0)


def test_qr_obstruction_examples():
    assert qr_obstruction(TRIBONACCI, 7) == Obstructed(7)   # U_7 = 13 = 6 mod 7
    assert qr_obstruction(TRIBONACCI, 5) is None            # U_5 = 4 is a QR
    assert qr_obstruction(TRIBONACCI, 1) is None


def test_obstruction_certifies_nonmember():
    for n in range(2, 61):
        hit = qr_obstruction(TRIBONACCI, n)
        if hit is not None:
            assert n % hit.p == 0 and hit.p % 2 == 1
            u_n = term(TRIBONACCI, n)
            assert u_n % hit.p != 0
            assert represent(u_n, n) == NonMember(), n


def test_membership_examples():
    rec = membership(TRIBONACCI, 5, 120)
    assert rec.status == Member(2, 0) and rec.method == "enumeration"
    rec = membership(TRIBONACCI, 7, 120)
    assert rec.status == Obstructed(7) and rec.method == "qr_sieve"
    rec = membership(POW2_PLUS_N, 8, 120)
    assert rec.status == Member(16, 1) and rec.method == "witness_formula"


def test_membership_witness_presets():
    for n in (1, 3, 17, 99):
        rec = membership(FIVE_FIB_SQ_MINUS_4, n, 0)
        assert rec.status == Member(lucas(n), 0)
    for n in (1, 2, 9, 50):
        rec = membership(SQUARE_POW, n, 0)
        assert rec.status == Member(2**n + 1, 0)


def test_membership_unknown_beyond_exact_range():
    # U_20 = 35890 = 0 mod 5, so the obstruction stays silent at n = 20
    assert qr_obstruction(TRIBONACCI, 20) is None
    rec = membership(TRIBONACCI, 20, 10)
    assert rec.status == Unknown()


def test_membership_validation():
    with pytest.raises(ValueError):
        membership(TRIBONACCI, 0, 10)
    with pytest.raises(ValueError):
        membership(RecurrenceSpec(1, 1, 1, 0, 0, 0), 5, 10)


def test_count_range_tribonacci_brute():
    records = classify_range(TRIBONACCI, 10, 120)
    by_n = {rec.n: rec for rec in records}
    for n in range(1, 11):
        u_n = term(TRIBONACCI, n)
        representable = brute_representable(u_n, n)
        status = by_n[n].status
        if isinstance(status, (Obstructed, NonMember)):
            assert not representable, n
        elif isinstance(status, Member):
            assert representable, n
        else:
            pytest.fail(f"unexpected unknown at n={n}")


def test_count_range_report_invariants():
    report = count_range(TRIBONACCI, 200, 60)
    assert sum(report.counts.values()) == 200
    assert report.upper_bound == 200 - report.certified_non_members
    assert report.member_count == report.counts["member"]
    assert 0 <= report.density_lower <= report.density_upper <= 1
    d = report.to_json_dict()
    assert d["x"] == 200 and d["counts"] == report.counts


def test_count_range_square_pow_all_members():
    report = count_range(SQUARE_POW, 100, 120)
    assert report.counts["member"] == 100
    assert report.density_lower == 1.0


def test_count_range_single_n():
    report = count_range(TRIBONACCI, 1, 120)
    assert sum(report.counts.values()) == 1
    assert report.counts["member"] == 1    # U_1 = 0 = 0^2 + 1*0^2


def test_worker_partition_is_invisible():
    serial = classify_range(TRIBONACCI, 300, 50)
    parallel = classify_range(TRIBONACCI, 300, 50, workers=4)
    assert serial == parallel


def test_csv_fields():
    rec = membership(TRIBONACCI, 7, 120)
    assert rec.csv_fields() == (7, "obstructed", "", "", 7)
    rec = membership(TRIBONACCI, 5, 120)
    assert rec.csv_fields() == (5, "member", 2, 0, "")
    assert status_name(Unknown()) == "unknown"


def test_monotone_obstructed_density():
    # increasing x does not decrease the obstructed density (reported
    # behaviour for the good presets at sampled sizes)
    densities = []
    for x in (200, 400, 800):
        report = count_range(TRIBONACCI, x, 0)
        densities.append(report.counts["obstructed"] / x)
    assert densities[0] <= densities[1] <= densities[2]
