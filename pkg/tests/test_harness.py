from dataclasses import replace

import pytest

from sniic.air import AirMatrix, build_air
from sniic.harness import (
    TABLE1_COLUMNS,
    interval_remark,
    load_golden,
    reproduce_table1,
    reproduce_table4,
    reproduce_table5,
    sweep_air_properties,
    sweep_schemes,
    table1_records,
    table4_diff,
    table5_diff,
    to_csv,
    verify_scheme,
)
from sniic.suicp import SniProblem, ScalarPadding, du_scheme, partition_params


def test_verify_example_scheme():
    p = SniProblem(13, 4, 1)
    r = verify_scheme(p, partition_params(p, 1, 5))
    assert r.verified and r.max_touched == 2
    assert r.basis_checked == 65 and r.decodes == 65 * 13 * 5
    assert not r.instantly_decodable


def test_verify_scalar_schemes():
    p = SniProblem(19, 13, 3)
    r = verify_scheme(p, ScalarPadding(1, 0, 15))
    assert r.verified and r.basis_checked == 19
    r = verify_scheme(SniProblem(4, 1, 1), du_scheme(SniProblem(4, 1, 1)))
    assert r.verified and r.descriptor == {"N": 3}


def test_verify_in_other_fields_and_random_mode():
    p = SniProblem(13, 4, 1)
    s = partition_params(p, 1, 5)
    assert verify_scheme(p, s, q=5).verified
    r = verify_scheme(p, s, q=3, random_trials=4, seed=1)
    assert r.verified and r.basis_checked == 4


def test_sabotaged_matrix_fails_as_data():
    p = SniProblem(13, 4, 1)
    s = partition_params(p, 1, 5)
    bad = s.L.matrix.with_entry(4, 1, 0)
    r = verify_scheme(p, replace(s, L=AirMatrix(5, 2, bad)))
    assert not r.verified
    assert r.failure_count > 20
    assert len(r.failures) == 21 and r.failures[-1].startswith("...")


def test_small_sweep_serial_equals_parallel():
    serial = sweep_schemes(9, workers=1)
    parallel = sweep_schemes(9, workers=2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]
    assert all(r.verified for r in serial)


def test_air_sweep_small_and_sensitivity():
    assert sweep_air_properties(12).passed
    M = build_air(5, 2).matrix.with_entry(4, 0, 0)
    r = sweep_air_properties(5, matrices={(5, 2): M})
    assert not r.passed
    assert any(v[:2] == (5, 2) for v in r.window_violations)


def test_table1_examples():
    recs = {(r["D"], r["U_min"]): r for r in table1_records(reproduce_table1())}
    assert len(recs) == 20
    r = recs[("5", "3")]
    assert (r["U_max"], r["a_min"], r["b_min"], r["upper"], r["partition_air"], r["instant"]) == (
        "5", "5", "11", "6.4545", "11x1", "yes")
    r = recs[("8", "3")]
    assert (r["a_min"], r["b_min"], r["upper"], r["partition_air"]) == ("7", "15", "9.4666", "15x2")
    r = recs[("7", "1")]
    assert (r["a_min"], r["b_min"], r["partition_air"]) == ("4", "35", "35x4")


def test_table1_known_divergences():
    computed = {(r["D"], r["U_min"]): r for r in table1_records(reproduce_table1())}
    golden = {(r["D"], r["U_min"]): r for r in load_golden("table1_golden.csv")}
    assert computed.keys() == golden.keys()
    changed = {(key, col) for key, g in golden.items() for col in g if computed[key][col] != g[col]}
    assert changed == {
        (("3", "2"), "a_min"),
        (("5", "1"), "full_air"), (("5", "1"), "partition_air"), (("5", "1"), "instant"),
        (("8", "2"), "partition_air"), (("8", "2"), "instant"),
        (("8", "4"), "a_min"), (("8", "4"), "upper"),
    }
    assert computed[("8", "4")]["upper"] == "10.1428"


def test_table4_and_table5_match_golden():
    assert table4_diff(reproduce_table4()) == []
    rows = reproduce_table5()
    assert table5_diff(rows) == []
    assert all(r["uniform"] for r in rows)
    by_d = {(r["D"], r["U_min"]): r for r in rows}
    assert by_d[(45, 3)]["a"] == 4 and by_d[(45, 3)]["rate"] == "47.3333"
    assert by_d[(27, 27)]["rate"] == "35.5000"
    assert by_d[(45, 23)]["skipped_U"] == [26]


def test_interval_remark():
    assert interval_remark(71, 44, 23) == "D in D_l and U in U_l"
    assert interval_remark(71, 3, 1) == "D not in D_l and U not in U_l"
    assert interval_remark(71, 45, 3) == "D in D_l and U not in U_l"


def test_to_csv():
    text = to_csv([{"a": 1, "b": "x"}], ("a", "b"))
    assert text.splitlines() == ["a,b", "1,x"]
    assert TABLE1_COLUMNS[0] == "K"


@pytest.mark.slow
def test_instant_rows_touch_one_symbol():
    for row in reproduce_table1():
        if not row.instant:
            continue
        p = SniProblem(row.K, row.D, row.U_min)
        s = partition_params(p, row.a_min, row.b_min)
        trials = None if s.b <= 8 else 3
        r = verify_scheme(p, s, random_trials=trials)
        assert s.gamma == 1 and r.verified and r.min_touched == r.max_touched == 1, row
