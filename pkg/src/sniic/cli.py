"""Command-line interface: ``sniic <subcommand>``.

Exit status: 0 ok, 1 verification failure or golden mismatch, 2 invalid
input, 3 file schema mismatch, 4 receiver cannot decode.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from typing import Any, List, Optional, Sequence

from sniic.air import AirMatrix, build_air, span_violations, window_violations
from sniic.codec import (
    PARTITIONED,
    SCALAR_PADDED,
    SCHEME_TAGS,
    Broadcast,
    MessageVector,
    decode,
    encode,
    vector_dim,
)
from sniic.errors import (
    DimensionMismatch,
    InvalidInput,
    MissingSideInfo,
    NotDecodable,
    SchemaError,
    SingularSystem,
)
from sniic.galois import PrimeField, is_prime
from sniic.harness import (
    TABLE1_COLUMNS,
    load_csv,
    reproduce_table1,
    reproduce_table4,
    reproduce_table5,
    schemes_for,
    sweep_air_properties,
    sweep_schemes,
    table1_diff,
    table1_records,
    table4_diff,
    table5_diff,
    to_csv,
    verify_scheme,
)
from sniic.suicp import (
    ScalarPadding,
    SniProblem,
    broadcast_rate_bounds,
    du_scheme,
    find_min_rate_fraction,
    find_scalar_padding,
    fraction_json,
    min_rate_scheme,
    partition_params,
    scalar_condition,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SCHEMA, EXIT_UNDECODABLE = 0, 1, 2, 3, 4
MAX_Q = 97


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _problem(args: argparse.Namespace) -> SniProblem:
    return SniProblem(args.K, args.D, args.U)


def _field_q(q: int) -> int:
    if not is_prime(q) or q > MAX_Q:
        raise InvalidInput(f"--q must be a prime <= {MAX_Q}, got {q}")
    return q


def _scheme(args: argparse.Namespace, p: SniProblem):
    if args.scheme == PARTITIONED:
        if args.a is None and args.b is None:
            return min_rate_scheme(p)
        if args.a is None or args.b is None:
            raise InvalidInput("give both --a and --b, or neither")
        return partition_params(p, args.a, args.b)
    if args.scheme == SCALAR_PADDED:
        if args.a is None and args.b is None:
            pad = find_scalar_padding(p)
            if pad is None:
                raise InvalidInput(f"no zero padding with a+b <= U+D exists for {p}")
            return pad
        if args.a is None or args.b is None:
            raise InvalidInput("give both --a and --b, or neither")
        if not scalar_condition(p, args.a, args.b):
            raise InvalidInput(f"padding (a={args.a}, b={args.b}) fails the gcd condition")
        return ScalarPadding(args.a, args.b, p.D + 1 + args.a + args.b)
    return du_scheme(p)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from None


# --- subcommands -----------------------------------------------------------


def cmd_air(args: argparse.Namespace) -> int:
    if args.sweep is not None:
        report = sweep_air_properties(args.sweep)
        _emit(_dump(report.to_dict()), args.out)
        return EXIT_OK if report.passed else EXIT_FAIL
    if args.m is None or args.n is None:
        raise InvalidInput("--m and --n are required")
    air = build_air(args.m, args.n)
    fields = (PrimeField(2), PrimeField(3)) if args.q is None else (PrimeField(_field_q(args.q)),)
    status = EXIT_OK
    if args.format == "json":
        doc = json.loads(air.to_json())
        if args.check:
            wv, sv = window_violations(air, True, fields), span_violations(air, "preceding", fields)
            doc["check"] = {"fields": [F.q for F in fields], "adjacent_independence": not wv,
                            "span_exclusion": not sv, "passed": not (wv or sv)}
            status = EXIT_OK if not (wv or sv) else EXIT_FAIL
        text = json.dumps(doc) + "\n"
    else:
        text = air.to_text()
        if args.check:
            wv, sv = window_violations(air, True, fields), span_violations(air, "preceding", fields)
            qs = ",".join(str(F.q) for F in fields)
            text += f"adjacent-independence (cyclic, GF({qs})): {'pass' if not wv else 'FAIL'}\n"
            text += f"span-exclusion (GF({qs})): {'pass' if not sv else 'FAIL'}\n"
            status = EXIT_OK if not (wv or sv) else EXIT_FAIL
    _emit(text, args.out)
    return status


def cmd_rate(args: argparse.Namespace) -> int:
    p = _problem(args)
    rf = find_min_rate_fraction(p)
    sch = partition_params(p, rf.a, rf.b)
    doc = {
        "K": p.K, "D": p.D, "U": p.U,
        "a_min": rf.a, "b_min": rf.b,
        "l1": fraction_json(rf.rate),
        "tau": sch.tau, "c": sch.c, "t": sch.t, "gamma": sch.gamma, "N": sch.N,
        "dims": sch.dims,
        "instant": sch.instantly_decodable,
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    _emit(_dump(broadcast_rate_bounds(_problem(args)).to_dict()), args.out)
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    p = _problem(args)
    scheme = _scheme(args, p)
    msg = MessageVector.from_json(_read(args.input))
    if (msg.K, msg.b) != (p.K, vector_dim(scheme)):
        raise SchemaError(f"message file is K={msg.K}, b={msg.b}; scheme needs "
                          f"K={p.K}, b={vector_dim(scheme)}")
    _emit(encode(p, scheme, msg).to_json() + "\n", args.out)
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    p = _problem(args)
    scheme = _scheme(args, p)
    bc = Broadcast.from_json(_read(args.input))
    if bc.scheme != args.scheme:
        raise SchemaError(f"broadcast file is {bc.scheme!r}, --scheme is {args.scheme!r}")
    msg = MessageVector.from_json(_read(args.messages))
    b = vector_dim(scheme)
    if (msg.K, msg.b, msg.q) != (p.K, b, bc.q):
        raise SchemaError("side-information file does not match the scheme or field")
    receivers = range(p.K) if args.receiver is None else [args.receiver]
    if args.receiver is not None and not 0 <= args.receiver < p.K:
        raise InvalidInput(f"--receiver must be in [0, {p.K})")
    out = []
    for k in receivers:
        side = msg.side_info(p, k)
        symbols, traces = [], []
        for j in range(b):
            val, tr = decode(p, scheme, bc, k, j, side)
            symbols.append(int(val))
            traces.append({"slot": j, "code_indices": sorted(tr.code_indices)})
        out.append({"receiver": k, "symbols": symbols, "trace": traces})
    doc: Any = out[0] if args.receiver is not None else {"q": bc.q, "scheme": bc.scheme, "receivers": out}
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    if args.which == "1":
        rows_for_diff: Any = reproduce_table1(args.K, args.Dmax)
        records: List[dict] = table1_records(rows_for_diff)
        columns: Sequence[str] = TABLE1_COLUMNS
        differ = table1_diff
    elif args.which == "4":
        records = reproduce_table4(args.K, args.lmax)
        columns = ("K", "l", "D_min", "D_max", "U_min", "U_max")
        differ, rows_for_diff = table4_diff, records
    else:
        records = reproduce_table5(args.K)
        columns = ("K", "D", "U_min", "U_max", "a", "b", "lower", "rate", "remark")
        differ, rows_for_diff = table5_diff, records
    if args.format == "json":
        text = _dump([{c: r[c] for c in columns} for r in records])
    elif args.format == "text":
        width = [max(len(c), *(len(str(r[c])) for r in records)) for c in columns]
        lines = ["  ".join(c.ljust(w) for c, w in zip(columns, width))]
        lines += ["  ".join(str(r[c]).ljust(w) for c, w in zip(columns, width)) for r in records]
        text = "\n".join(lines) + "\n"
    else:
        text = to_csv(records, columns)
    _emit(text, args.out)
    if args.golden:
        diffs = differ(rows_for_diff, load_csv(args.golden))
        for d in diffs:
            print(d, file=sys.stderr)
        return EXIT_FAIL if diffs else EXIT_OK
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.sweep_kmax is not None:
        reports = sweep_schemes(args.sweep_kmax, workers=args.workers)
    else:
        p = _problem(args)
        q = _field_q(args.q)
        schemes = schemes_for(p) if args.all_schemes else [_scheme(args, p)]
        if args.sabotage is not None:
            i, j = args.sabotage
            first = schemes[0]
            if not hasattr(first, "t"):
                raise InvalidInput("--sabotage applies to the partitioned scheme")
            if not (0 <= i < first.t and 0 <= j < first.gamma):
                raise InvalidInput(f"--sabotage entry outside the {first.dims} matrix")
            M = first.L.matrix
            flipped = M.with_entry(i, j, 1 - M.entries[i * M.cols + j])
            schemes[0] = replace(first, L=AirMatrix(first.t, first.gamma, flipped))
        reports = [verify_scheme(p, s, q=q, random_trials=args.random, seed=args.seed)
                   for s in schemes]
    ok = all(r.verified for r in reports)
    if args.format == "csv":
        recs = [dict(r.to_dict(), descriptor=json.dumps(r.descriptor),
                     failures=r.failure_count) for r in reports]
        text = to_csv(recs, ("K", "D", "U", "scheme", "descriptor", "basis_checked", "decodes",
                             "verified", "failures", "max_touched", "instantly_decodable"))
    else:
        text = _dump({"verified": ok, "reports": [r.to_dict() for r in reports]})
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_FAIL


# --- parser ----------------------------------------------------------------


def _pair(text: str) -> tuple:
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected ROW,COL") from None
    return i, j


def _add_problem(sp: argparse.ArgumentParser, required: bool = True) -> None:
    sp.add_argument("-K", "--K", dest="K", type=int, required=required, help="number of messages")
    sp.add_argument("-D", "--D", dest="D", type=int, required=required, help="interferers after")
    sp.add_argument("-U", "--U", dest="U", type=int, required=required, help="interferers before")


def _add_scheme(sp: argparse.ArgumentParser, default: Optional[str] = None) -> None:
    sp.add_argument("--scheme", choices=SCHEME_TAGS, required=default is None, default=default)
    sp.add_argument("--a", type=int, help="rate/padding parameter a (default: minimal)")
    sp.add_argument("--b", type=int, help="rate/padding parameter b (default: minimal)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sniic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("air", help="print an AIR matrix")
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--q", type=int, help="check over GF(q) only (default GF(2) and GF(3))")
    sp.add_argument("--check", action="store_true", help="run both property checkers")
    sp.add_argument("--sweep", type=int, metavar="M_MAX", help="check every n <= m <= M_MAX")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_air)

    sp = sub.add_parser("rate", help="minimal-rate (a, b) and the partition scheme")
    _add_problem(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("bounds", help="broadcast-rate bounds")
    _add_problem(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("encode", help="encode a message file")
    _add_problem(sp)
    _add_scheme(sp)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="decode a broadcast file at one or all receivers")
    _add_problem(sp)
    _add_scheme(sp)
    sp.add_argument("--in", dest="input", required=True, help="broadcast file")
    sp.add_argument("--messages", required=True,
                    help="message file; only the receiver's side information is read from it")
    sp.add_argument("--receiver", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("table", help="reproduce the K=71 rate tables")
    sp.add_argument("--which", choices=("1", "4", "5"), default="1")
    sp.add_argument("--K", type=int, default=71)
    sp.add_argument("--Dmax", type=int, default=10)
    sp.add_argument("--lmax", type=int, default=5)
    sp.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    sp.add_argument("--golden", help="CSV to diff against; mismatches exit 1")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="basis round-trip verification")
    _add_problem(sp, required=False)
    _add_scheme(sp, default=PARTITIONED)
    sp.add_argument("--all-schemes", action="store_true")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--random", type=int, metavar="TRIALS", help="random smoke mode")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sabotage", type=_pair, metavar="ROW,COL",
                    help="flip one entry of the partition AIR matrix")
    sp.add_argument("--sweep-kmax", type=int, help="verify every valid problem with K <= this")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify" and args.sweep_kmax is None and None in (args.K, args.D, args.U):
        ap.error("verify needs -K -D -U or --sweep-kmax")
    try:
        return args.func(args)
    except (SchemaError, DimensionMismatch, MissingSideInfo) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (NotDecodable, SingularSystem) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDECODABLE
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
