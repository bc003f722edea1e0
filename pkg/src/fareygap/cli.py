"""Command-line front end.

Exit codes: 0 success / verified, 1 verification failed, 2 undecidable at
maximum precision, 3 usage or I/O error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time

from . import __version__
from .asymptotics import (DEFAULT_CHECKPOINT, DEFAULT_Q_EXACT, DEFAULT_WINDOW_END,
                          verify_conjecture)
from .errors import FareyError, UndecidableError
from .numeric import MAX_PRECISION, constants, format_sci
from .report import (COLUMNS, decimal_enclosure, exact_dec, hi_str, interval_fields, lo_str,
                     render, summarize, verification_rows)
from .sieve import build_sieve, sieve_cap
from .spacing import (METHODS, PREFIX_CEILING, C_of_QI, build_prefix_tables, compute_s2,
                      s2_general)
from .stream import RationalInterval

EXIT_OK, EXIT_FAILED, EXIT_UNDECIDABLE, EXIT_USAGE = 0, 1, 2, 3

log = logging.getLogger("fareygap")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", type=int)
    p.add_argument("--from", dest="q_from", type=int)
    p.add_argument("--to", dest="q_to", type=int)
    p.add_argument("--precision-bits", type=int, default=128)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json", "text"], default="text")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--exact-ceiling", type=int)
    p.add_argument("--max-sieve", type=int, help="overrides FAREYGAP_MAX_SIEVE")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fareygap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    s2 = sub.add_parser("s2", parents=[common], help="exact S2(Q)")
    s2.add_argument("--method", choices=[*METHODS, "all"], default="moebius")

    verify = sub.add_parser("verify", parents=[common],
                            help="certify C(Q) < 3 and/or the explicit error bound")
    verify.add_argument("--conjecture", action="store_true")
    verify.add_argument("--theorem2", action="store_true")
    verify.add_argument("--checkpoint", type=int, default=DEFAULT_CHECKPOINT)
    verify.add_argument("--window-end", type=int, default=DEFAULT_WINDOW_END)

    sub.add_parser("table", parents=[common], help="verification table for a range of Q")
    sub.add_parser("constants", parents=[common], help="enclosures of the analytic constants")

    gaps = sub.add_parser("gaps", parents=[common], help="S_{2,h,I}(Q) on a subinterval")
    gaps.add_argument("--interval", default="0/1:1/1", help="half-open (lo, hi] as a/b:c/d")
    gaps.add_argument("--h", type=int, default=1)
    return parser


def _range(args, default_from=2, default_to=None) -> range:
    if args.q is not None:
        if args.q_from is not None or args.q_to is not None:
            raise UsageError("use either --q or --from/--to")
        lo = hi = args.q
    else:
        lo = args.q_from if args.q_from is not None else default_from
        hi = args.q_to if args.q_to is not None else default_to
        if hi is None:
            raise UsageError("give --q or --from/--to")
    if not 2 <= lo <= hi:
        raise UsageError(f"need 2 <= from <= to, got {lo}..{hi}")
    return range(lo, hi + 1)


def _validate(args):
    if not 64 <= args.precision_bits <= MAX_PRECISION:
        raise UsageError(f"--precision-bits must be in [64, {MAX_PRECISION}]")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    if args.max_sieve is not None and args.max_sieve < 1:
        raise UsageError("--max-sieve must be >= 1")


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


S2_COLUMNS = ["Q", "N", "S2_num", "S2_den", "S2_dec", "method", "agree"]


def cmd_s2(args) -> int:
    Qs = _range(args)
    methods = list(METHODS) if args.method == "all" else [args.method]
    sieve = build_sieve(Qs[-1])
    tables = None
    if "moebius" in methods and Qs[-1] <= PREFIX_CEILING and len(Qs) > 1:
        tables = build_prefix_tables(Qs[-1], sieve)
    rows, status = [], EXIT_OK
    n = 1 + sum(sieve.phi[1:Qs[0]])
    for Q in Qs:
        n += sieve.phi[Q]
        results = [compute_s2(Q, m, sieve=sieve, tables=tables, exact_ceiling=args.exact_ceiling)
                   for m in methods]
        for r in results:
            log.info("Q=%d method=%s %.3fs", Q, r.method, r.elapsed)
        agree = all(r.value == results[0].value for r in results)
        if not agree:
            log.error("methods disagree at Q=%d", Q)
            status = EXIT_FAILED
        value = results[0].value
        rows.append({"Q": str(Q), "N": str(n), "S2_num": str(value.numerator),
                     "S2_den": str(value.denominator),
                     "S2_dec": exact_dec(value, args.precision_bits),
                     "method": args.method, "agree": "true" if agree else "false"})
    _emit(args, render(rows, args.format, S2_COLUMNS))
    return status


def _conjecture_summary(report) -> dict:
    out = {
        "verdict": "true" if report.verdict else "false",
        "q_exact": str(report.q_exact),
        "checkpoint": str(report.checkpoint),
        "exact_ok": str(report.exact_ok).lower(),
        "counterexample": str(report.counterexample or ""),
        "g_checkpoint_ok": str(report.g_checkpoint_ok).lower(),
        **interval_fields("g_checkpoint", report.g_checkpoint),
        "g_decreasing_window": f"[{report.checkpoint}, {report.window_end}]",
        "g_decreasing_ok": str(report.g_decreasing_ok).lower(),
        "argmax": str(report.argmax_Q),
        "argmax_certified": str(report.argmax_certified).lower(),
        **interval_fields("max_C", report.max_C),
    }
    lo12, hi12 = decimal_enclosure(report.max_C, 12)
    out["max_C_12dp_lo"], out["max_C_12dp_hi"] = lo12, hi12
    out["failed_step"] = report.failed_step or ""
    out["version"] = __version__
    out["precision"] = str(report.precision)
    return out


def _worse(a: int, b: int) -> int:
    # a definite failure outranks an undecided check
    order = [EXIT_OK, EXIT_UNDECIDABLE, EXIT_FAILED]
    return max(a, b, key=order.index)


def cmd_verify(args) -> int:
    run_conjecture = args.conjecture or not args.theorem2
    status = EXIT_OK
    chunks = []
    if run_conjecture:
        q_exact = args.q_to if args.q_to is not None else DEFAULT_Q_EXACT
        if q_exact < 2 or args.checkpoint < 2:
            raise UsageError("--to and --checkpoint must be >= 2")
        report = verify_conjecture(q_exact, args.checkpoint, precision=args.precision_bits,
                                   window_end=args.window_end, threads=args.threads)
        summary = _conjecture_summary(report)
        if not report.verdict:
            status = _worse(status, EXIT_UNDECIDABLE if report.undecidable else EXIT_FAILED)
            print(f"fareygap: verification failed at step: {report.failed_step}",
                  file=sys.stderr)
        rows = [{"Q": str(Q), **interval_fields("C", C)} for Q, C in report.C_values.items()]
        chunks.append(render(rows, args.format, ["Q", "C_lo", "C_hi"], summary))
    if args.theorem2:
        Qs = _range(args, default_to=2000)
        rows = verification_rows(Qs[0], Qs[-1], args.precision_bits, args.threads)
        trailer = summarize(rows, args.precision_bits)
        if any(r["pass"] == "undecided" for r in rows):
            status = _worse(status, EXIT_UNDECIDABLE)
        elif any(r["pass"] != "true" for r in rows):
            status = _worse(status, EXIT_FAILED)
        chunks.append(render(rows, args.format, COLUMNS, trailer))
    _emit(args, "".join(chunks))
    return status


def cmd_table(args) -> int:
    Qs = _range(args)
    rows = verification_rows(Qs[0], Qs[-1], args.precision_bits, args.threads)
    _emit(args, render(rows, args.format, COLUMNS, summarize(rows, args.precision_bits)))
    return EXIT_OK


def cmd_constants(args) -> int:
    table = constants(args.precision_bits)
    rows = [{"name": name, "lo": lo_str(x), "hi": hi_str(x),
             "width": format_sci(x.width, 6, "up")}
            for name, x in table.items()]
    _emit(args, render(rows, args.format, ["name", "lo", "hi", "width"]))
    return EXIT_OK


GAP_COLUMNS = ["Q", "h", "lo", "hi", "S2_num", "S2_den", "S2_dec", "C_lo", "C_hi"]


def cmd_gaps(args) -> int:
    interval = RationalInterval.parse(args.interval)
    if args.h < 1:
        raise UsageError("--h must be >= 1")
    rows = []
    for Q in _range(args):
        value = s2_general(Q, interval, args.h)
        C = C_of_QI(Q, interval, args.precision_bits)
        rows.append({"Q": str(Q), "h": str(args.h), "lo": str(interval.lo),
                     "hi": str(interval.hi), "S2_num": str(value.numerator),
                     "S2_den": str(value.denominator),
                     "S2_dec": exact_dec(value, args.precision_bits),
                     "C_lo": lo_str(C), "C_hi": hi_str(C)})
    _emit(args, render(rows, args.format, GAP_COLUMNS))
    return EXIT_OK


COMMANDS = {"s2": cmd_s2, "verify": cmd_verify, "table": cmd_table,
            "constants": cmd_constants, "gaps": cmd_gaps}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        _validate(args)
        with sieve_cap(args.max_sieve):
            status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fareygap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndecidableError as exc:
        print(f"fareygap: undecidable: {exc}", file=sys.stderr)
        return EXIT_UNDECIDABLE
    except (FareyError, OSError) as exc:
        print(f"fareygap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.info("elapsed %.2fs", time.perf_counter() - start)
    return status
