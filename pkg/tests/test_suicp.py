from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sniic.errors import InvalidInput, NotInS
from sniic.suicp import (
    SniProblem,
    broadcast_rate_bounds,
    d_interval,
    du_scheme,
    find_min_rate_fraction,
    find_scalar_padding,
    full_rate_class,
    in_set_S,
    interference_set,
    min_rate_scheme,
    partition_params,
    partition_sets,
    scalar_condition,
    side_info_set,
    truncate_decimal,
    u_interval,
    valid_problems,
)


@pytest.mark.parametrize("K,D,U", [(5, 3, 2), (5, 1, 2), (0, 0, 0), (5, -1, 0)])
def test_invalid_problems(K, D, U):
    with pytest.raises(InvalidInput):
        SniProblem(K, D, U)


def test_interference_and_side_info():
    assert interference_set(SniProblem(5, 1, 1), 0) == {4, 1}
    assert interference_set(SniProblem(13, 4, 1), 1) == {0, 2, 3, 4, 5}
    assert interference_set(SniProblem(71, 10, 3), 70) == {67, 68, 69} | set(range(10))
    assert side_info_set(SniProblem(5, 1, 1), 0) == {2, 3}
    assert side_info_set(SniProblem(13, 4, 1), 3) == {0, 1, 8, 9, 10, 11, 12}
    assert side_info_set(SniProblem(4, 1, 1), 0) == {2}
    with pytest.raises(InvalidInput):
        interference_set(SniProblem(5, 1, 1), 5)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60).flatmap(
    lambda K: st.integers(0, K - 1).flatmap(
        lambda D: st.tuples(st.just(K), st.just(D), st.integers(0, min(D, K - 1 - D))))))
def test_side_info_partitions_the_messages(kdu):
    p = SniProblem(*kdu)
    for k in range(p.K):
        I, S = interference_set(p, k), side_info_set(p, k)
        assert len(I) == p.U + p.D
        assert len(S) == p.K - p.U - p.D - 1
        assert I | S | {k} == set(range(p.K)) and not (I & S) and k not in I | S


def test_in_set_S():
    assert in_set_S(SniProblem(13, 4, 1), 1, 5)
    assert in_set_S(SniProblem(71, 1, 1), 1, 35)
    assert not in_set_S(SniProblem(13, 4, 1), 0, 1)
    with pytest.raises(InvalidInput):
        in_set_S(SniProblem(13, 4, 1), 0, 0)


@pytest.mark.parametrize("K,D,U,a,b,rate", [
    (71, 1, 1, 1, 35, Fraction(71, 35)),
    (71, 10, 3, 5, 6, Fraction(71, 6)),
    (71, 44, 23, 26, 1, Fraction(71)),
    (71, 5, 3, 5, 11, Fraction(71, 11)),
    (71, 8, 3, 7, 15, Fraction(142, 15)),
])
def test_min_rate_examples(K, D, U, a, b, rate):
    rf = find_min_rate_fraction(SniProblem(K, D, U))
    assert (rf.a, rf.b, rf.rate) == (a, b, rate)


def brute_min_rate(p):
    """Independent oracle: collect all of S in the box, then minimise."""
    found = []
    for a in range(p.K * (p.K - p.D - 1) + 1):
        for b in range(1, p.K // (p.U + 1) + 1):
            if a <= b * (p.K - p.D - 1) and gcd(b * p.K, b * (p.D + 1) + a) >= b * (p.U + 1):
                found.append((Fraction(a, b), b, a))
    ratio, b, a = min(found)
    return a, b


def test_min_rate_matches_brute_force_small_K():
    for p in valid_problems(25):
        rf = find_min_rate_fraction(p)
        assert (rf.a, rf.b) == brute_min_rate(p), p
        assert in_set_S(p, rf.a, rf.b)
        assert p.D + 1 <= rf.rate <= p.K


def test_partition_params():
    s = partition_params(SniProblem(13, 4, 1), 1, 5)
    assert (s.tau, s.t, s.gamma, s.N, s.c) == (13, 5, 2, 26, 3)
    assert s.L.rows() == [(1, 0), (0, 1), (1, 0), (0, 1), (1, 1)]
    s = partition_params(SniProblem(71, 2, 1), 2, 23)
    assert (s.t, s.gamma, s.dims, s.instantly_decodable) == (23, 1, "23x1", True)
    s = partition_params(SniProblem(5, 1, 1), 1, 2)
    assert (s.tau, s.t, s.gamma) == (5, 2, 1)
    assert s.L.rows() == [(1,), (1,)]
    with pytest.raises(NotInS):
        partition_params(SniProblem(13, 4, 1), 0, 1)


def test_partition_sets():
    p = SniProblem(13, 4, 1)
    sets = partition_sets(p, partition_params(p, 1, 5))
    assert sets[6] == [6, 19, 32, 45, 58]
    assert [w // 5 for w in sets[6]] == [1, 3, 6, 9, 11]
    flat = sorted(w for s in sets for w in s)
    assert flat == list(range(65))


def test_partition_sets_singletons():
    p = SniProblem(6, 1, 0)
    s = partition_params(p, 4, 1)
    assert s.tau == p.K * s.b
    assert all(len(x) == 1 for x in partition_sets(p, s))


def test_scalar_padding():
    assert find_scalar_padding(SniProblem(19, 13, 3)) == (1, 0, 15)
    assert find_scalar_padding(SniProblem(71, 52, 16)) == (1, 0, 54)
    assert find_scalar_padding(SniProblem(12, 3, 1)) == (0, 0, 4)
    assert scalar_condition(SniProblem(19, 13, 3), 1, 0)
    assert not scalar_condition(SniProblem(19, 13, 3), 0, 0)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 40).flatmap(
    lambda K: st.integers(0, K - 1).flatmap(
        lambda D: st.tuples(st.just(K), st.just(D), st.integers(0, min(D, K - 1 - D))))))
def test_padding_is_first_hit(kdu):
    p = SniProblem(*kdu)
    pad = find_scalar_padding(p)
    if gcd(p.K, p.D + 1) >= p.U + 1:
        assert pad == (0, 0, p.D + 1)
    if pad is not None:
        assert scalar_condition(p, pad.a, pad.b)
        for total in range(pad.a + pad.b):
            assert not any(scalar_condition(p, a, total - a) for a in range(total + 1))


def test_intervals_and_classes():
    assert d_interval(71, 1) == (35, 46) and u_interval(71, 1) == (23, 34)
    assert d_interval(71, 2) == (47, 52) and u_interval(71, 2) == (17, 22)
    assert d_interval(71, 5) == (59, 59) and u_interval(71, 5) == (10, 10)
    assert full_rate_class(SniProblem(71, 44, 23)) == 1
    assert full_rate_class(SniProblem(71, 59, 10)) == 5
    assert full_rate_class(SniProblem(71, 3, 1)) is None
    assert full_rate_class(SniProblem(71, 52, 16)) is None


def test_full_rate_class_means_rate_K():
    for K in range(5, 60):
        for p in valid_problems(K, K):
            if full_rate_class(p) is not None:
                assert find_min_rate_fraction(p).rate == p.K, p


def test_bounds_examples():
    r = broadcast_rate_bounds(SniProblem(71, 44, 23))
    assert (r.l1, r.l2, r.du1, r.upper, r.lower) == (71, 71, 68, 68, 45)
    r = broadcast_rate_bounds(SniProblem(71, 1, 1))
    assert r.upper == r.l1 == Fraction(71, 35)


def test_bounds_52_16_vector_code_beats_padding():
    # (1, 4) is in S: gcd(284, 213) = 71 >= 68, so l1 = 53 + 1/4
    p = SniProblem(71, 52, 16)
    assert in_set_S(p, 1, 4)
    r = broadcast_rate_bounds(p)
    assert (r.l1, r.l2, r.du1) == (Fraction(213, 4), 54, 69)
    assert r.upper == Fraction(213, 4)
    assert r.to_dict()["upper"] == {"num": 213, "den": 4, "decimal": "53.2500"}


def test_bounds_ordering_small_K():
    for p in valid_problems(30):
        r = broadcast_rate_bounds(p)
        assert r.lower <= r.upper <= min(r.du1, r.l1)


def test_truncate_decimal():
    assert truncate_decimal(Fraction(71, 35)) == "2.0285"
    assert truncate_decimal(Fraction(142, 15)) == "9.4666"
    assert truncate_decimal(Fraction(71)) == "71.0000"
    assert truncate_decimal(Fraction(-1, 3)) == "-0.3333"
    assert truncate_decimal(Fraction(7, 2), 0) == "3"


def test_min_rate_scheme_and_du():
    p = SniProblem(13, 4, 1)
    s = min_rate_scheme(p)
    assert (s.a, s.b, s.rate) == (1, 5, Fraction(26, 5))
    d = du_scheme(SniProblem(4, 1, 1))
    assert d.N == 3 and d.L.m == 4


def test_capacity_for_D_equal_U_equal_1():
    for K in range(5, 72, 2):
        assert find_min_rate_fraction(SniProblem(K, 1, 1)).rate == Fraction(K, K // 2)
