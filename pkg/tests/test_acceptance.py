"""Acceptance criteria, one test each, run at the stated tolerances.

Each test records a PASS/FAIL line that is echoed in the terminal summary.
"""

import time
from fractions import Fraction

import pytest

from sniic.air import build_air
from sniic.harness import (
    reproduce_table1,
    reproduce_table4,
    reproduce_table5,
    sweep_air_properties,
    sweep_schemes,
    table1_diff,
    table4_diff,
    table5_diff,
    verify_scheme,
)
from sniic.suicp import (
    SniProblem,
    broadcast_rate_bounds,
    find_min_rate_fraction,
    find_scalar_padding,
    min_rate_scheme,
    partition_params,
    valid_problems,
)

INSTANT_DIMS = ["35x1", "23x1", "17x1", "14x1", "11x1", "10x1", "8x1", "23x1", "7x1", "7x1", "6x1"]


def test_criterion_1_air_ground_truth(criterion):
    rows = build_air(5, 2).rows()
    ok = rows == [(1, 0), (0, 1), (1, 0), (0, 1), (1, 1)]
    assert criterion(1, ok, f"build_air(5,2) rows {rows}")


@pytest.mark.slow
def test_criterion_2_air_property_sweep(criterion):
    t0 = time.perf_counter()
    r = sweep_air_properties(40, orientations=("preceding",))
    elapsed = time.perf_counter() - t0
    n_win, n_span = len(r.window_violations), len(r.span_violations["preceding"])
    ok = n_win == 0 and n_span == 0 and elapsed < 60
    assert criterion(2, ok, f"{r.pairs_checked} shapes, {n_win} window and {n_span} span "
                            f"violations over GF{r.fields}, {elapsed:.1f}s")


def test_criterion_3_table1_reproduction(criterion):
    t0 = time.perf_counter()
    rows = reproduce_table1(71, 10)
    diffs = table1_diff(rows)
    instant = [r.partition_air for r in rows if r.instant]
    elapsed = time.perf_counter() - t0
    ok = len(rows) == 20 and not diffs and instant == INSTANT_DIMS and elapsed < 60
    detail = f"{len(rows)} rows, {len(diffs)} cell mismatches vs golden, instant dims {instant}"
    for d in diffs:
        print("  " + d)
    assert criterion(3, ok, detail), "\n".join(diffs)


def test_criterion_4_example_end_to_end(criterion):
    p = SniProblem(13, 4, 1)
    s = partition_params(p, 1, 5)
    r = verify_scheme(p, s)
    ok = ((s.tau, s.t, s.gamma, s.N) == (13, 5, 2, 26) and r.verified
          and r.basis_checked == 65 and r.decodes == 65 * 13 * 5
          and r.min_touched == r.max_touched == 2)
    assert criterion(4, ok, f"tau={s.tau} t={s.t} gamma={s.gamma} N={s.N}, {r.decodes} decodes, "
                            f"{r.failure_count} failures, touched {r.min_touched}..{r.max_touched}")


def test_criterion_5_scalar_constructions(criterion):
    parts, ok = [], True
    for K, D, U, want in [(19, 13, 3, (1, 0, 15)), (71, 52, 16, (1, 0, 54))]:
        p = SniProblem(K, D, U)
        pad = find_scalar_padding(p)
        r = verify_scheme(p, pad)
        L = build_air(K + pad.a, pad.length)
        good = tuple(pad) == want and r.verified and r.basis_checked == K
        ok &= good
        parts.append(f"({K},{D},{U}) padding ({pad.a},{pad.b}) length {pad.length} "
                     f"via {L.m}x{L.n}, {r.failure_count} failures")
    assert criterion(5, ok, "; ".join(parts))


def test_criterion_6_bounds(criterion):
    b1 = broadcast_rate_bounds(SniProblem(71, 44, 23))
    b2 = broadcast_rate_bounds(SniProblem(71, 52, 16))
    d4 = table4_diff(reproduce_table4(71, 5))
    d5 = table5_diff(reproduce_table5(71))
    checks = {
        "upper(71,44,23)=68": b1.upper == 68,
        "upper(71,52,16)=54": b2.upper == 54,
        "table IV": not d4,
        "table V": not d5,
    }
    failed = [k for k, v in checks.items() if not v]
    detail = (f"upper(71,44,23)={b1.upper}, upper(71,52,16)={b2.upper} "
              f"(l1={b2.l1}, l2={b2.l2}, du1={b2.du1}), "
              f"{len(d4)} table IV and {len(d5)} table V mismatches"
              + (f"; failing: {failed}" if failed else ""))
    assert criterion(6, not failed, detail)


def test_criterion_7_capacity_cross_check(criterion):
    bad_rate = [K for K in range(5, 72, 2)
                if find_min_rate_fraction(SniProblem(K, 1, 1)).rate != Fraction(K, K // 2)]
    bad_verify = []
    for K in range(5, 22, 2):
        p = SniProblem(K, 1, 1)
        if not verify_scheme(p, min_rate_scheme(p)).verified:
            bad_verify.append(K)
    ok = not bad_rate and not bad_verify
    assert criterion(7, ok, f"rate mismatches {bad_rate}, verification failures {bad_verify} "
                            f"(odd K in 5..71, verified K <= 21)")


@pytest.mark.slow
def test_criterion_8_full_sweep(criterion):
    t0 = time.perf_counter()
    reports = sweep_schemes(25)
    elapsed = time.perf_counter() - t0
    problems = list(valid_problems(25))
    failed = [r for r in reports if not r.verified]
    inverted = [p for p in problems
                if not broadcast_rate_bounds(p).lower <= broadcast_rate_bounds(p).upper]
    ok = not failed and not inverted and elapsed < 600
    detail = (f"{len(problems)} problems, {len(reports)} schemes, "
              f"{sum(r.decodes for r in reports)} decodes, {len(failed)} failed, "
              f"{len(inverted)} with lower > upper, {elapsed:.0f}s")
    for r in failed[:10]:
        print("  ", r.problem, r.scheme, r.failures[:2])
    assert criterion(8, ok, detail)
