"""Asymptotic main term with its explicit error bound, and the certified check of C(Q) < 3."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import DomainError
from .numeric import (DEFAULT_PRECISION, MAX_PRECISION, ConstantTable, Interval,
                      constants, interval_log, rational_to_interval)
from .sieve import SieveTables, U, build_sieve
from .spacing import PrefixTables, build_prefix_tables, s2_moebius

log = logging.getLogger(__name__)

DEFAULT_Q_EXACT = 500
DEFAULT_CHECKPOINT = 374
DEFAULT_WINDOW_END = 10**6


def _logQ(Q: int, precision: int) -> Interval:
    return interval_log(rational_to_interval(Q, precision))


def main_term(Q: int, consts: ConstantTable | None = None) -> Interval:
    """12 log Q/(pi^2 Q^2) - 2 zeta'(2)/(zeta(2)^2 Q^2) + (2 gamma + 1) 6/(pi^2 Q^2)."""
    if Q < 2:
        raise DomainError("Q must be >= 2")
    c = consts or constants()
    Q2 = Q * Q
    return (c.twelve_over_pi2 * _logQ(Q, c.precision) + c.zeta_prime_term + c.gamma_term) / Q2


def classical_main_term(Q: int, consts: ConstantTable | None = None) -> Interval:
    """12/(pi^2 Q^2) * (log Q + gamma + 1/2 - zeta'(2)/zeta(2))."""
    if Q < 2:
        raise DomainError("Q must be >= 2")
    c = consts or constants()
    inner = _logQ(Q, c.precision) + c.gamma + mpq(1, 2) - c.zeta_prime_2 / c.zeta2
    return c.twelve_over_pi2 * inner / (Q * Q)


def r14_bound(Q: int, consts: ConstantTable | None = None) -> Interval:
    """(64 (log Q)^2 + 106 log Q + 269) / Q^3."""
    if Q < 2:
        raise DomainError("Q must be >= 2")
    p = (consts or constants()).precision
    L = _logQ(Q, p)
    return (64 * L ** 2 + 106 * L + 269) / Q ** 3


@dataclass(frozen=True)
class AsymptoticBreakdown:
    Q: int
    main: Interval
    r14_bound: Interval
    s2_exact: mpq
    residual: Interval
    pass_: bool
    decided: bool = True
    precision: int = DEFAULT_PRECISION


def verify_theorem2(Q: int, s2: mpq | None = None, *, sieve: SieveTables | None = None,
                    tables: PrefixTables | None = None, precision: int = DEFAULT_PRECISION,
                    max_precision: int = MAX_PRECISION) -> AsymptoticBreakdown:
    """Certify |S2(Q) - main_term(Q)| <= r14_bound(Q), doubling precision while undecided."""
    if s2 is None:
        s2 = s2_moebius(Q, sieve, tables)
    prec = precision
    while True:
        c = constants(prec)
        main = main_term(Q, c)
        bound = r14_bound(Q, c)
        residual = abs(rational_to_interval(s2, c.precision) - main)
        verdict = residual.le(bound)
        if verdict is not None or prec >= max_precision:
            return AsymptoticBreakdown(Q, main, bound, s2, residual, bool(verdict),
                                       verdict is not None, prec)
        prec = min(2 * prec, max_precision)


def kanemitsu_refined_residual(Q: int, sieve: SieveTables | None = None, s2: mpq | None = None,
                               consts: ConstantTable | None = None) -> Interval:
    """S2(Q) - main_term(Q) - 4 U(Q) log Q / Q^3."""
    if sieve is None:
        sieve = build_sieve(Q)
    if s2 is None:
        s2 = s2_moebius(Q, sieve)
    c = consts or constants()
    correction = 4 * rational_to_interval(U(Q, sieve), c.precision) * _logQ(Q, c.precision) / Q ** 3
    return rational_to_interval(s2, c.precision) - main_term(Q, c) - correction


def C_of_Q(Q: int, s2: mpq | None = None, precision: int = DEFAULT_PRECISION, *,
           sieve: SieveTables | None = None, tables: PrefixTables | None = None) -> Interval:
    """Enclosure of C(Q) = S2(Q) Q^2 / log Q."""
    if Q < 2:
        raise DomainError("Q must be >= 2")
    if s2 is None:
        s2 = s2_moebius(Q, sieve, tables)
    return rational_to_interval(s2 * Q * Q, precision) / _logQ(Q, precision)


def _as_interval(x, consts: ConstantTable) -> Interval:
    return x if isinstance(x, Interval) else rational_to_interval(x, consts.precision)


def secondary_coefficient(consts: ConstantTable) -> Interval:
    """-2 zeta'(2)/zeta(2)^2 + (2 gamma + 1) 6/pi^2, the 1/log x coefficient of G."""
    return consts.zeta_prime_term + consts.gamma_term


def G(x, consts: ConstantTable | None = None) -> Interval:
    """Upper bound for C(x): 12/pi^2 + c/log x + 64 log x/x + 106/x + 269/(x log x)."""
    c = consts or constants()
    x = _as_interval(x, c)
    if x.lo <= 1:
        raise DomainError("G needs x > 1")
    L = interval_log(x)
    return (c.twelve_over_pi2 + secondary_coefficient(c) / L + 64 * L / x + 106 / x
            + 269 / (x * L))


def G_prime(x, consts: ConstantTable | None = None) -> Interval:
    """Derivative of G, term by term."""
    c = consts or constants()
    x = _as_interval(x, c)
    if x.lo <= 1:
        raise DomainError("G' needs x > 1")
    L = interval_log(x)
    x2 = x ** 2
    L2 = L ** 2
    return (-secondary_coefficient(c) / (x * L2) + 64 * (1 - L) / x2 - 106 / x2
            - 269 * (L + 1) / (x2 * L2))


def G_decreasing_certificate(start: int, stop: int, consts: ConstantTable | None = None,
                             max_depth: int = 60) -> bool:
    """Certify G'(x) < 0 on [start, stop] by adaptive bisection into interval cells."""
    if not 2 <= start < stop:
        raise DomainError("need 2 <= start < stop")
    c = consts or constants()
    stack = [(mpq(start), mpq(stop), 0)]
    while stack:
        a, b, depth = stack.pop()
        cell = Interval(rational_to_interval(a, c.precision).lo,
                        rational_to_interval(b, c.precision).hi, c.precision)
        if G_prime(cell, c).hi < 0:
            continue
        if depth >= max_depth:
            log.warning("G' not certified negative on [%s, %s]", a, b)
            return False
        m = (a + b) / 2
        stack.append((m, b, depth + 1))
        stack.append((a, m, depth + 1))
    return True


def _certify(check, precision: int, max_precision: int):
    """Run check(consts) -> bool | None, doubling precision while it returns None."""
    prec = precision
    while True:
        c = constants(prec)
        outcome = check(c)
        if outcome is not None or prec >= max_precision:
            return outcome, c
        prec = min(2 * prec, max_precision)


@dataclass
class ConjectureReport:
    q_exact: int
    checkpoint: int
    window_end: int
    verdict: bool = False
    undecidable: bool = False
    failed_step: str | None = None
    counterexample: int | None = None
    exact_ok: bool = False
    g_checkpoint: Interval | None = None
    g_checkpoint_ok: bool = False
    g_decreasing_ok: bool = False
    max_C: Interval | None = None
    argmax_Q: int | None = None
    argmax_certified: bool = False
    C_values: dict = field(default_factory=dict, repr=False)
    precision: int = DEFAULT_PRECISION


def exact_s2_table(Q_from: int, Q_to: int, threads: int = 1) -> dict[int, mpq]:
    """Exact S2(Q) for Q_from..Q_to via the Moebius route, merged by Q."""
    sieve = build_sieve(Q_to)
    tables = build_prefix_tables(Q_to, sieve)
    Qs = range(Q_from, Q_to + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda Q: s2_moebius(Q, tables=tables), Qs))
    else:
        values = [s2_moebius(Q, tables=tables) for Q in Qs]
    return dict(zip(Qs, values))


def verify_conjecture(q_exact: int = DEFAULT_Q_EXACT, checkpoint: int = DEFAULT_CHECKPOINT, *,
                      precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION,
                      window_end: int = DEFAULT_WINDOW_END, threads: int = 1,
                      s2_values: dict[int, mpq] | None = None) -> ConjectureReport:
    """Certify C(Q) < 3 exactly on [2, q_exact], then bound the tail with G.

    G(checkpoint) < 3 is checked directly and G' < 0 is certified on
    [checkpoint, window_end]; beyond the window every term of G' is negative
    once log x > 1.
    """
    if q_exact < 2 or checkpoint < 2:
        raise DomainError("q_exact and checkpoint must be >= 2")
    report = ConjectureReport(q_exact, checkpoint, max(window_end, checkpoint + 1),
                              precision=precision)
    if s2_values is None:
        s2_values = exact_s2_table(2, q_exact, threads)

    undecided = False
    # (i) exact range
    report.exact_ok = True
    for Q in range(2, q_exact + 1):
        s2 = s2_values[Q]
        outcome, _ = _certify(lambda c: C_of_Q(Q, s2, c.precision).lt(3), precision, max_precision)
        report.C_values[Q] = C_of_Q(Q, s2, precision)
        if outcome is not True:
            report.exact_ok = False
            report.failed_step = report.failed_step or "exact-range"
            if outcome is None:
                undecided = True
            elif report.counterexample is None:
                report.counterexample = Q

    Cs = report.C_values
    argmax = max(Cs, key=lambda Q: Cs[Q].hi)
    report.argmax_Q = argmax
    report.max_C = Cs[argmax]
    report.argmax_certified = all(Cs[argmax].lo > Cs[Q].hi for Q in Cs if Q != argmax)

    # (ii) checkpoint
    outcome, c = _certify(lambda c: G(checkpoint, c).lt(3), precision, max_precision)
    report.g_checkpoint = G(checkpoint, c)
    report.g_checkpoint_ok = outcome is True
    if not report.g_checkpoint_ok:
        report.failed_step = report.failed_step or "G-checkpoint"
        undecided = undecided or outcome is None

    # (iii) monotone bounding function on the finite window
    report.g_decreasing_ok = G_decreasing_certificate(checkpoint, report.window_end,
                                                      constants(precision))
    if not report.g_decreasing_ok:
        report.failed_step = report.failed_step or "G-monotone"
        undecided = True

    configured = checkpoint <= q_exact + 1
    if not configured:
        report.failed_step = report.failed_step or "configuration"

    definite_failure = (report.counterexample is not None or not configured
                        or (report.g_checkpoint is not None and report.g_checkpoint.lo >= 3))
    report.verdict = (report.exact_ok and report.g_checkpoint_ok and report.g_decreasing_ok
                      and configured)
    report.undecidable = undecided and not definite_failure
    return report
