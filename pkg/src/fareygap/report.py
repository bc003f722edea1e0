"""Per-Q verification rows and their serializations.

Decimal endpoints are rounded outward (lower bounds down, upper bounds up)
so every printed interval still encloses the certified one. Exact values
travel as numerator/denominator integer strings.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from gmpy2 import mpq

from . import __version__
from .asymptotics import C_of_Q, verify_theorem2
from .numeric import DEFAULT_PRECISION, Interval, digits_for, format_sci
from .sieve import build_sieve
from .spacing import PREFIX_CEILING, build_prefix_tables, s2_moebius

COLUMNS = ["Q", "N", "S2_num", "S2_den", "S2_dec", "C_lo", "C_hi", "main_lo", "main_hi",
           "residual_hi", "bound_lo", "pass"]


def lo_str(x: Interval) -> str:
    return format_sci(x.lo, digits_for(x.precision), "down")


def hi_str(x: Interval) -> str:
    return format_sci(x.hi, digits_for(x.precision), "up")


def exact_dec(r: mpq, precision: int = DEFAULT_PRECISION) -> str:
    return format_sci(r, digits_for(precision), "nearest")


def decimal_enclosure(x: Interval, places: int = 12) -> tuple[str, str]:
    """Outward rounding of an enclosure to a fixed number of decimal places."""
    lo, hi = x.bounds()
    scale = 10 ** places
    lo_i = (lo * scale).__floor__()
    hi_i = (hi * scale).__ceil__()

    def fmt(n: int) -> str:
        sign = "-" if n < 0 else ""
        whole, frac = divmod(abs(n), scale)
        return f"{sign}{whole}.{frac:0{places}d}"

    return fmt(int(lo_i)), fmt(int(hi_i))


def verification_row(Q: int, s2: mpq, N: int, precision: int = DEFAULT_PRECISION) -> dict:
    bd = verify_theorem2(Q, s2, precision=precision)
    C = C_of_Q(Q, s2, precision)
    return {
        "Q": str(Q),
        "N": str(N),
        "S2_num": str(s2.numerator),
        "S2_den": str(s2.denominator),
        "S2_dec": exact_dec(s2, precision),
        "C_lo": lo_str(C),
        "C_hi": hi_str(C),
        "main_lo": lo_str(bd.main),
        "main_hi": hi_str(bd.main),
        "residual_hi": hi_str(bd.residual),
        "bound_lo": lo_str(bd.r14_bound),
        "pass": "true" if bd.pass_ else ("false" if bd.decided else "undecided"),
    }


def verification_rows(Q_from: int, Q_to: int, precision: int = DEFAULT_PRECISION,
                      threads: int = 1) -> list[dict]:
    """Rows for Q_from..Q_to, always returned in ascending Q order."""
    sieve = build_sieve(Q_to)
    tables = build_prefix_tables(Q_to, sieve) if Q_to <= PREFIX_CEILING else None
    # Farey counts by running prefix sum of phi
    counts = {}
    n = 1 + sum(sieve.phi[1:Q_from])
    for Q in range(Q_from, Q_to + 1):
        n += sieve.phi[Q]
        counts[Q] = n

    def row(Q):
        s2 = s2_moebius(Q, sieve, tables)
        return verification_row(Q, s2, counts[Q], precision)

    Qs = range(Q_from, Q_to + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(row, Qs))
    return [row(Q) for Q in Qs]


def summarize(rows: list[dict], precision: int = DEFAULT_PRECISION) -> dict:
    """Trailer with the all-pass verdict and the largest C enclosure."""
    best = max(rows, key=lambda r: Fraction(r["C_hi"]))
    verdict = all(r["pass"] == "true" for r in rows) and all(
        Fraction(r["C_hi"]) < 3 for r in rows)
    return {
        "verdict": "true" if verdict else "false",
        "argmax": best["Q"],
        "max_C_lo": best["C_lo"],
        "max_C_hi": best["C_hi"],
        "version": __version__,
        "precision": str(precision),
    }


def to_csv(rows: list[dict], columns: list[str] = COLUMNS, trailer: dict | None = None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    for key, value in (trailer or {}).items():
        buf.write(f"# {key}={value}\n")
    return buf.getvalue()


def to_json(rows: list[dict], trailer: dict | None = None) -> str:
    return json.dumps({"rows": rows, "trailer": trailer or {}}, indent=1) + "\n"


def to_text(rows: list[dict], columns: list[str] = COLUMNS, trailer: dict | None = None) -> str:
    if not rows:
        return ""
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in columns}
    lines = ["  ".join(c.rjust(widths[c]) for c in columns)]
    lines += ["  ".join(r[c].rjust(widths[c]) for c in columns) for r in rows]
    lines += [f"{k}: {v}" for k, v in (trailer or {}).items()]
    return "\n".join(lines) + "\n"


def render(rows, fmt: str, columns: list[str] = COLUMNS, trailer: dict | None = None) -> str:
    if fmt == "csv":
        return to_csv(rows, columns, trailer)
    if fmt == "json":
        return to_json(rows, trailer)
    return to_text(rows, columns, trailer)


def interval_fields(name: str, x: Interval) -> dict:
    return {f"{name}_lo": lo_str(x), f"{name}_hi": hi_str(x)}

