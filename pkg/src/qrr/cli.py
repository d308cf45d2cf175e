"""Command-line front end.

    qrr verify [--all | --ids A,B] [--order N] [--json]
    qrr coeffs --series G --upto 10
    qrr recursion --upto 200
    qrr partitions [--class MOD5_PM1] --upto 40
    qrr list

Exit codes: 0 all checks pass, 1 a verification or cross-check failed,
2 usage error, 3 internal arithmetic error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .builders import SERIES_NAMES, SeriesBuilder, build_series
from .errors import ArithmeticFault, QRRError, UnknownIdentityError
from .partitions import ENUM_LIMIT, PartitionClass, count_dp, count_enumerate, parse_class
from .qseries import MAX_DENOM
from .recursion import first_divergence, recursion_tables, series_coefficients
from .registry import fmt_inst, lookup, registry
from .verify import FAIL, verify_one

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ARITH = 0, 1, 2, 3


def _default_order() -> int:
    raw = os.environ.get("QRR_DEFAULT_ORDER")
    if raw is None:
        return 100
    try:
        n = int(raw)
    except ValueError:
        return 100
    return n if n >= 1 else 100


def _emit(args, text: str, obj: dict):
    print(json.dumps(obj) if args.json else text, flush=True)


def cmd_verify(args) -> int:
    if args.ids:
        ids = [i for chunk in args.ids for i in chunk.split(",") if i]
        try:
            specs = [lookup(i) for i in ids]
        except UnknownIdentityError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        specs = registry()
    M, D = args.order * args.denom, args.denom
    code = EXIT_OK
    counts = {"pass": 0, "fail": 0, "skipped": 0, "error": 0}
    for spec in specs:
        for inst in spec.instantiations:
            try:
                rep = verify_one(spec, inst, M, D)
            except QRRError as exc:
                fault = isinstance(exc, ArithmeticFault)
                code = max(code, EXIT_ARITH if fault else EXIT_FAIL)
                counts["error"] += 1
                obj = {"id": spec.id, "instantiation": fmt_inst(inst), "order": args.order,
                       "status": "error", "first_mismatch": None, "millis": None,
                       "error": f"{type(exc).__name__}: {exc}"}
                _emit(args, f"{spec.id:<22} [{obj['instantiation']}] error {obj['error']}", obj)
                continue
            if rep.status == FAIL:
                code = max(code, EXIT_FAIL)
                counts["fail"] += 1
            elif rep.status == "pass":
                counts["pass"] += 1
            else:
                counts["skipped"] += 1
            _emit(args, str(rep), rep.to_dict())
    if not args.json:
        print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped, "
              f"{counts['error']} errors")
    return code


def cmd_coeffs(args) -> int:
    b = SeriesBuilder(args.series)
    s = build_series(b, args.upto * args.denom, args.denom)
    vals = [s.coeff(n * args.denom) for n in range(args.upto + 1)]
    _emit(args, " ".join(map(str, vals)), {"series": str(b), "upto": args.upto, "coeffs": vals})
    return EXIT_OK


def cmd_recursion(args) -> int:
    N = args.upto
    t = recursion_tables(N)
    checks = {
        "g vs G sum": first_divergence(t.g, series_coefficients("G", N)),
        "g vs G product": first_divergence(t.g, series_coefficients("tildeG", N)),
        "h vs H sum": first_divergence(t.h, series_coefficients("H", N)),
        "h vs H product": first_divergence(t.h, series_coefficients("tildeH", N)),
        "g vs partitions (dp)": first_divergence(t.g, count_dp(PartitionClass.MOD5_PM1, N)),
        "h vs partitions (dp)": first_divergence(t.h, count_dp(PartitionClass.MOD5_PM2, N)),
        "f vs partitions (dp)": first_divergence(
            t.f, count_dp(PartitionClass.NOT_DIV_4, len(t.f) - 1)),
    }
    E = min(N, args.enum_limit)
    checks["g vs partitions (enumeration)"] = first_divergence(
        t.g, [count_enumerate(PartitionClass.SUPERDISTINCT, n, args.enum_limit)
              for n in range(E + 1)])
    checks["h vs partitions (enumeration)"] = first_divergence(
        t.h, [count_enumerate(PartitionClass.SUPERDISTINCT_MIN2, n, args.enum_limit)
              for n in range(E + 1)])
    bad = {k: v for k, v in checks.items() if v is not None}
    status = "ok" if not bad else "mismatch"
    if args.json:
        print(json.dumps({"upto": N, "f": list(t.f), "g": list(t.g), "h": list(t.h),
                          "status": status, "first_divergence": bad}))
    else:
        print("g:", " ".join(map(str, t.g)))
        print("h:", " ".join(map(str, t.h)))
        for k, v in bad.items():
            print(f"mismatch {k} at n={v}")
        print("status", status)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_partitions(args) -> int:
    classes = [parse_class(c) for c in args.cls] if args.cls else list(PartitionClass)
    code = EXIT_OK
    E = min(args.upto, args.enum_limit)
    for c in classes:
        dp = count_dp(c, args.upto)
        en = [count_enumerate(c, n, args.enum_limit) for n in range(E + 1)]
        n_bad = first_divergence(dp, en)
        if n_bad is not None:
            code = EXIT_FAIL
        obj = {"class": c.name, "description": c.description, "counts": dp,
               "enumerated_upto": E, "oracles_agree": n_bad is None}
        text = f"{c.name}: {' '.join(map(str, dp))}"
        if n_bad is not None:
            text += f"  (enumeration disagrees at n={n_bad})"
        _emit(args, text, obj)
    return code


def cmd_list(args) -> int:
    for spec in registry():
        obj = {"id": spec.id, "anchor": spec.anchor,
               "instantiations": [fmt_inst(i) for i in spec.instantiations],
               "members": [m.label for m in spec.members]}
        _emit(args, f"{spec.id:<22} {len(spec.instantiations):>2} inst  {spec.anchor}", obj)
    return EXIT_OK


def _positive(v: str) -> int:
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _nonneg(v: str) -> int:
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _denom(v: str) -> int:
    n = int(v)
    if not 1 <= n <= MAX_DENOM:
        raise argparse.ArgumentTypeError(f"must lie in 1..{MAX_DENOM}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_positive, default=_default_order(),
                        help="q-order to verify through (default 100 or $QRR_DEFAULT_ORDER)")
    common.add_argument("--denom", type=_denom, default=4,
                        help="exponent denominator D (default 4)")
    common.add_argument("--json", action="store_true", help="emit JSON lines")
    common.add_argument("--enum-limit", type=_nonneg, default=ENUM_LIMIT,
                        help="largest n for explicit partition enumeration")

    p = argparse.ArgumentParser(prog="qrr", description="Exact truncated q-series identity checks.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify registry identities")
    g = v.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="every registry entry (default)")
    g.add_argument("--ids", action="append", help="comma-separated identity ids")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("coeffs", parents=[common], help="coefficient table of a named series")
    c.add_argument("--series", choices=[n for n in SERIES_NAMES if n != "R"], default="G")
    c.add_argument("--upto", type=_nonneg, default=20)
    c.set_defaults(func=cmd_coeffs)

    r = sub.add_parser("recursion", parents=[common],
                       help="coefficient recursion cross-checked against series and partitions")
    r.add_argument("--upto", type=_nonneg, default=200)
    r.set_defaults(func=cmd_recursion)

    pa = sub.add_parser("partitions", parents=[common], help="partition counts by class")
    pa.add_argument("--class", dest="cls", action="append",
                    choices=[c.name for c in PartitionClass])
    pa.add_argument("--upto", type=_nonneg, default=40)
    pa.set_defaults(func=cmd_partitions)

    ls = sub.add_parser("list", parents=[common], help="list registry entries")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ArithmeticFault as exc:
        print(f"arithmetic error: {exc}", file=sys.stderr)
        return EXIT_ARITH
    except QRRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
