"""Verification campaigns and reproduction of the K=71 rate tables.

Codes are linear, so decoding every basis message vector at every receiver
certifies the whole message space; ``verify_scheme`` does exactly that.
"""

from __future__ import annotations

import csv
import io
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from itertools import groupby
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from sniic.air import (
    DEFAULT_TEST_FIELDS,
    build_air,
    span_violations,
    window_violations,
)
from sniic.codec import MessageVector, Scheme, decode, encode, scheme_tag, vector_dim
from sniic.errors import SniError
from sniic.galois import PrimeField
from sniic.suicp import (
    PartitionScheme,
    ScalarPadding,
    SniProblem,
    d_class,
    d_interval,
    du_scheme,
    find_min_rate_fraction,
    find_scalar_padding,
    min_rate_scheme,
    partition_params,
    truncate_decimal,
    u_interval,
    valid_problems,
)

TABLE5_CELLS: Tuple[Tuple[int, int, int], ...] = (
    (44, 1, 5),
    (44, 6, 22),
    (44, 23, 26),
    (45, 1, 2),
    (45, 3, 22),
    (45, 23, 26),
    (27, 27, 27),
    (33, 25, 25),
    (15, 2, 2),
    (3, 1, 1),
)

MAX_FAILURES_KEPT = 20


# --- scheme verification ----------------------------------------------------


@dataclass
class VerificationReport:
    problem: SniProblem
    scheme: str
    descriptor: Dict[str, Any]
    basis_checked: int = 0
    decodes: int = 0
    failures: List[str] = field(default_factory=list)
    failure_count: int = 0
    min_touched: Optional[int] = None
    max_touched: int = 0
    instantly_decodable: bool = False

    @property
    def verified(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.problem.K,
            "D": self.problem.D,
            "U": self.problem.U,
            "scheme": self.scheme,
            "descriptor": self.descriptor,
            "basis_checked": self.basis_checked,
            "decodes": self.decodes,
            "verified": self.verified,
            "failures": self.failures,
            "failure_count": self.failure_count,
            "min_touched": self.min_touched,
            "max_touched": self.max_touched,
            "instantly_decodable": self.instantly_decodable,
        }


def describe(scheme: Scheme) -> Dict[str, Any]:
    if isinstance(scheme, PartitionScheme):
        return {"a": scheme.a, "b": scheme.b, "c": scheme.c, "tau": scheme.tau,
                "t": scheme.t, "gamma": scheme.gamma, "N": scheme.N}
    if isinstance(scheme, ScalarPadding):
        return {"a": scheme.a, "b": scheme.b, "N": scheme.length}
    return {"N": scheme.N}


def verify_scheme(p: SniProblem, scheme: Scheme, q: int = 2,
                  random_trials: Optional[int] = None, seed: int = 0) -> VerificationReport:
    """Round-trip every basis message vector through encoder and all decoders.

    With ``random_trials`` set, random message vectors are used instead
    (smoke mode; not a certificate).
    """
    b = vector_dim(scheme)
    Kb = p.K * b
    report = VerificationReport(p, scheme_tag(scheme), describe(scheme))
    if random_trials is None:
        vectors: Iterable[MessageVector] = (MessageVector.basis(p.K, b, w, q) for w in range(Kb))
    else:
        rng = random.Random(seed)
        vectors = [MessageVector(q, p.K, b, tuple(rng.randrange(q) for _ in range(Kb)))
                   for _ in range(random_trials)]
    n_failed = 0
    for msg in vectors:
        report.basis_checked += 1
        bc = encode(p, scheme, msg)
        for k in range(p.K):
            side = msg.side_info(p, k)
            for j in range(b):
                report.decodes += 1
                want = msg.symbols[k * b + j]
                try:
                    got, trace = decode(p, scheme, bc, k, j, side)
                except SniError as exc:
                    n_failed += 1
                    if len(report.failures) < MAX_FAILURES_KEPT:
                        report.failures.append(f"receiver {k} slot {j}: {type(exc).__name__}: {exc}")
                    continue
                report.max_touched = max(report.max_touched, trace.touched)
                if report.min_touched is None or trace.touched < report.min_touched:
                    report.min_touched = trace.touched
                if int(got) != want:
                    n_failed += 1
                    if len(report.failures) < MAX_FAILURES_KEPT:
                        report.failures.append(
                            f"receiver {k} slot {j}: decoded {int(got)}, expected {want} "
                            f"(message {list(msg.symbols) if random_trials else 'basis'})")
    report.failure_count = n_failed
    if n_failed > len(report.failures):
        report.failures.append(f"... {n_failed - len(report.failures)} more failures")
    report.instantly_decodable = report.verified and report.max_touched == 1
    return report


def schemes_for(p: SniProblem) -> List[Scheme]:
    """Minimum-rate partitioned code, the K x (D+U+1) code, and the padded code if one exists."""
    out: List[Scheme] = [min_rate_scheme(p), du_scheme(p)]
    pad = find_scalar_padding(p)
    if pad is not None:
        out.append(pad)
    return out


def _verify_all(p: SniProblem) -> List[VerificationReport]:
    return [verify_scheme(p, s) for s in schemes_for(p)]


def sweep_schemes(k_max: int, k_min: int = 1, workers: Optional[int] = None) -> List[VerificationReport]:
    """verify_scheme for every scheme of every valid problem with K <= k_max.

    Results come back in (K, D, U, scheme) order regardless of worker count.
    """
    problems = list(valid_problems(k_max, k_min))
    if workers == 1:
        nested = map(_verify_all, problems)
        return [r for rs in nested for r in rs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        nested = pool.map(_verify_all, problems, chunksize=4)
        return [r for rs in nested for r in rs]


# --- AIR property sweep -----------------------------------------------------


@dataclass
class AirSweepReport:
    m_max: int
    fields: Tuple[int, ...]
    pairs_checked: int = 0
    window_violations: List[Tuple[int, int, int, int]] = field(default_factory=list)
    span_violations: Dict[str, List[Tuple[int, int, int, int]]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.window_violations and not self.span_violations.get("preceding")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self) | {"passed": self.passed}


def sweep_air_properties(m_max: int, fields: Sequence[PrimeField] = DEFAULT_TEST_FIELDS,
                         orientations: Sequence[str] = ("preceding", "following"),
                         matrices: Optional[Dict[Tuple[int, int], Any]] = None) -> AirSweepReport:
    """Run both AIR checkers on build_air(m, n) for all 1 <= n <= m <= m_max.

    ``matrices`` overrides individual (m, n) entries, for checker sensitivity tests.
    Violations are recorded as (m, n, row, q).
    """
    report = AirSweepReport(m_max, tuple(F.q for F in fields))
    report.span_violations = {o: [] for o in orientations}
    for m in range(1, m_max + 1):
        for n in range(1, m + 1):
            M = (matrices or {}).get((m, n)) or build_air(m, n)
            report.pairs_checked += 1
            report.window_violations += [(m, n, i, q) for i, q in window_violations(M, True, fields)]
            for o in orientations:
                report.span_violations[o] += [(m, n, k, q) for k, q in span_violations(M, o, fields)]
    return report


# --- tables -----------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    K: int
    D: int
    U_min: int
    U_max: int
    a_min: int
    b_min: int
    lower: int
    rate: Fraction
    full_air: str
    partition_air: str
    instant: bool

    @property
    def upper(self) -> str:
        return truncate_decimal(self.rate)

    def csv_record(self) -> Dict[str, str]:
        return {
            "K": str(self.K), "D": str(self.D), "U_min": str(self.U_min), "U_max": str(self.U_max),
            "a_min": str(self.a_min), "b_min": str(self.b_min), "lower": str(self.lower),
            "upper": self.upper, "full_air": self.full_air, "partition_air": self.partition_air,
            "instant": "yes" if self.instant else "no",
        }


TABLE1_COLUMNS = ("K", "D", "U_min", "U_max", "a_min", "b_min", "lower", "upper",
                  "full_air", "partition_air", "instant")


def reproduce_table1(K: int = 71, D_max: int = 10) -> List[TableRow]:
    """Rows for 1 <= U <= D <= D_max, consecutive U with equal (a_min, b_min) merged."""
    rows: List[TableRow] = []
    for D in range(1, D_max + 1):
        cells = []
        for U in range(1, D + 1):
            if U + D >= K:
                break
            p = SniProblem(K, D, U)
            rf = find_min_rate_fraction(p)
            cells.append((U, rf, partition_params(p, rf.a, rf.b)))
        for _, grp in groupby(cells, key=lambda c: (c[1].a, c[1].b)):
            grp = list(grp)
            U0, rf, sch = grp[0]
            rows.append(TableRow(K, D, U0, grp[-1][0], rf.a, rf.b, D + 1, rf.rate,
                                 f"{K * rf.b}x{sch.N}", sch.dims, sch.instantly_decodable))
    return rows


def reproduce_table4(K: int = 71, l_max: int = 5) -> List[Dict[str, int]]:
    out = []
    for l in range(1, l_max + 1):
        (d0, d1), (u0, u1) = d_interval(K, l), u_interval(K, l)
        out.append({"K": K, "l": l, "D_min": d0, "D_max": d1, "U_min": u0, "U_max": u1})
    return out


def interval_remark(K: int, D: int, U: int, l_max: int = 5) -> str:
    """Whether D lies in some D_l and U in U_l, l restricted to [1, l_max].

    U is tested against the same l as D when D is classified, otherwise
    against every U_l.
    """
    l = d_class(K, D)
    if l is not None and l > l_max:
        l = None
    if l is not None:
        lo, hi = u_interval(K, l)
        u_in = lo <= U <= hi
    else:
        u_in = any(u_interval(K, j)[0] <= U <= u_interval(K, j)[1] for j in range(1, l_max + 1))
    d_part = "D in D_l" if l is not None else "D not in D_l"
    u_part = "U in U_l" if u_in else "U not in U_l"
    return f"{d_part} and {u_part}"


def reproduce_table5(K: int = 71, cells: Sequence[Tuple[int, int, int]] = TABLE5_CELLS) -> List[Dict[str, Any]]:
    """One row per listed (D, U range); every U in a range must share (a, b).

    U values with U + D >= K are not valid instances; they are skipped and
    listed under "skipped_U".
    """
    out = []
    for D, u0, u1 in cells:
        found: Dict[Tuple[int, int], List[int]] = {}
        skipped = [U for U in range(u0, u1 + 1) if U + D >= K]
        for U in range(u0, u1 + 1):
            if U in skipped:
                continue
            rf = find_min_rate_fraction(SniProblem(K, D, U))
            found.setdefault((rf.a, rf.b), []).append(U)
        (a, b), _ = next(iter(found.items()))
        rate = D + 1 + Fraction(a, b)
        out.append({
            "K": K, "D": D, "U_min": u0, "U_max": u1, "a": a, "b": b, "lower": D + 1,
            "rate": truncate_decimal(rate), "rate_exact": rate,
            "remark": interval_remark(K, D, u0),
            "uniform": len(found) == 1,
            "skipped_U": skipped,
            "remark_uniform": len({interval_remark(K, D, U) for U in range(u0, u1 + 1)}) == 1,
        })
    return out


def load_golden(name: str) -> List[Dict[str, str]]:
    text = resources.files("sniic.data").joinpath(name).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def load_csv(path: str) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _same_number(a: str, b: str) -> bool:
    try:
        return Decimal(a) == Decimal(b)
    except ArithmeticError:
        return a == b


def diff_rows(computed: Sequence[Dict[str, Any]], golden: Sequence[Dict[str, str]],
              key: Sequence[str], numeric: Sequence[str] = ()) -> List[str]:
    """Cell-level differences between two tables, matched on ``key`` columns.

    Columns in ``numeric`` compare as decimals, so "71" equals "71.0000".
    """
    diffs: List[str] = []
    comp = {tuple(str(r[k]) for k in key): r for r in computed}
    gold = {tuple(str(r[k]) for k in key): r for r in golden}
    for k in gold.keys() - comp.keys():
        diffs.append(f"row {dict(zip(key, k))}: in golden, not computed")
    for k in comp.keys() - gold.keys():
        diffs.append(f"row {dict(zip(key, k))}: computed, not in golden")
    for k in sorted(gold.keys() & comp.keys(), key=lambda t: [int(x) for x in t]):
        g, c = gold[k], comp[k]
        for col, gv in g.items():
            cv = str(c.get(col, ""))
            same = _same_number(cv, gv) if col in numeric else cv == gv
            if not same:
                diffs.append(f"row {dict(zip(key, k))} column {col}: computed {cv!r}, golden {gv!r}")
    return diffs


def table1_records(rows: Sequence[TableRow]) -> List[Dict[str, str]]:
    return [r.csv_record() for r in rows]


def table1_diff(rows: Sequence[TableRow], golden: Optional[Sequence[Dict[str, str]]] = None) -> List[str]:
    golden = load_golden("table1_golden.csv") if golden is None else golden
    return diff_rows(table1_records(rows), golden, key=("K", "D", "U_min", "U_max"))


def table4_diff(rows: Sequence[Dict[str, int]], golden: Optional[Sequence[Dict[str, str]]] = None) -> List[str]:
    golden = load_golden("table4_golden.csv") if golden is None else golden
    return diff_rows(rows, golden, key=("K", "l"))


def table5_diff(rows: Sequence[Dict[str, Any]], golden: Optional[Sequence[Dict[str, str]]] = None) -> List[str]:
    golden = load_golden("table5_golden.csv") if golden is None else golden
    return diff_rows(rows, golden, key=("K", "D", "U_min", "U_max"), numeric=("rate",))


def to_csv(records: Sequence[Dict[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
    columns = list(columns or (records[0].keys() if records else []))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({c: r[c] for c in columns})
    return buf.getvalue()
