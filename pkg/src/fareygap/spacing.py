"""Exact sums of squared Farey gaps.

Three independent routes to S2(Q):

* ``s2_direct``  walks the Farey sequence and squares each gap;
* ``s2_omega``   sums 1/(q q')**2 over coprime denominator pairs with q + q' > Q;
* ``s2_moebius`` removes the coprimality condition with the Moebius function
  and evaluates the inner sums A(k) from harmonic-type prefix sums.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .errors import EmptyIntervalError, RangeError, ResourceLimitError
from .numeric import DEFAULT_PRECISION, Interval, interval_log, rational_to_interval
from .sieve import SieveTables, build_sieve
from .stream import RationalInterval, farey_iter, farey_iter_interval

DIRECT_CEILING = 5000
MOEBIUS_CEILING = 100_000
PREFIX_CEILING = 5000

METHODS = ("direct", "omega", "moebius")


def _check_ceiling(Q: int, ceiling: int, method: str):
    if Q < 2:
        raise ValueError("Q must be >= 2")
    if Q > ceiling:
        raise ResourceLimitError(f"{method}: Q={Q} exceeds exact ceiling {ceiling}")


@dataclass(frozen=True)
class PrefixTables:
    """Prefix sums B[n] = sum 1/m^2, H[n] = sum 1/m, F[n] = sum 1/m^4 for n <= limit.

    ``corr[k]`` holds sum_{s=2}^{k} (2 B[s-1]/s^2 + 4 H[s-1]/s^3), so that
    A(k) = B[k]^2 - corr[k]; ``mu4`` holds sum_{d<=n} mu(d)/d^4 when the
    tables were built with a sieve.
    """

    limit: int
    B: list
    H: list
    F: list
    corr: list
    mu4: list | None = None


def build_prefix_tables(limit: int, sieve: SieveTables | None = None,
                        max_limit: int = PREFIX_CEILING) -> PrefixTables:
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > max_limit:
        raise ResourceLimitError(f"prefix tables limited to {max_limit}, asked for {limit}")
    zero = mpq(0)
    B, H, F, corr = [zero], [zero], [zero], [zero, zero]
    for n in range(1, limit + 1):
        if n >= 2:
            corr.append(corr[-1] + 2 * B[n - 1] / (n * n) + 4 * H[n - 1] / n ** 3)
        B.append(B[-1] + mpq(1, n * n))
        H.append(H[-1] + mpq(1, n))
        F.append(F[-1] + mpq(1, n ** 4))
    mu4 = None
    if sieve is not None:
        sieve.check(limit, "prefix limit")
        mu4 = [zero]
        for d in range(1, limit + 1):
            m = sieve.mu[d]
            mu4.append(mu4[-1] + mpq(m, d ** 4) if m else mu4[-1])
    return PrefixTables(limit, B, H, F, corr, mu4)


def A_exact(k: int, tables: PrefixTables) -> mpq:
    """A(k) = sum over m, n <= k with m + n >= k + 1 of 1/(m n)^2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > tables.limit:
        raise RangeError(f"k={k} exceeds prefix limit {tables.limit}")
    return tables.B[k] ** 2 - tables.corr[k]


def A_bruteforce(k: int) -> Fraction:
    """Double sum defining A(k); O(k^2) with stdlib Fractions (test oracle)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    L = math.lcm(*range(1, k + 1)) ** 2
    total = 0
    for m in range(1, k + 1):
        row = L // (m * m)
        total += sum(row * (L // (n * n)) for n in range(k + 1 - m, k + 1))
    return Fraction(total, L * L)


def s2_direct(Q: int, exact_ceiling: int = DIRECT_CEILING) -> mpq:
    """Stream F_Q and accumulate squared gaps exactly."""
    _check_ceiling(Q, exact_ceiling, "direct")
    # every (b d)^2 with b, d coprime <= Q divides L
    L = math.lcm(*range(1, Q + 1)) ** 2
    total = 0
    it = farey_iter(Q)
    a, b = next(it)
    for c, d in it:
        bd = b * d
        total += (L // (bd * bd)) * (c * b - a * d) ** 2
        a, b = c, d
    return mpq(total, L)


def s2_omega(Q: int, exact_ceiling: int = DIRECT_CEILING) -> mpq:
    """Sum 1/(q q')^2 over 1 <= q, q' <= Q, q + q' > Q, gcd(q, q') = 1."""
    _check_ceiling(Q, exact_ceiling, "omega")
    L = math.lcm(*range(1, Q + 1)) ** 2
    total = 0
    gcd = math.gcd
    for q in range(1, Q + 1):
        for r in range(Q - q + 1, Q + 1):
            if gcd(q, r) == 1:
                qr = q * r
                total += L // (qr * qr)
    return mpq(total, L)


def quotient_blocks(Q: int):
    """Maximal runs lo..hi of d sharing k = Q // d, as (lo, hi, k)."""
    d = 1
    while d <= Q:
        k = Q // d
        hi = Q // k
        yield d, hi, k
        d = hi + 1


def _streamed_A_and_mu4(Q: int, sieve: SieveTables):
    # A(k) at the O(sqrt Q) needed k, and mu(d)/d^4 prefixes at block ends
    blocks = list(quotient_blocks(Q))
    need_k = {k for _, _, k in blocks}
    need_d = {hi for _, hi, _ in blocks}
    A, mu4 = {}, {0: mpq(0)}
    B = H = corr = mpq(0)
    m4 = mpq(0)
    for n in range(1, Q + 1):
        if n >= 2:
            corr += 2 * B / (n * n) + 4 * H / n ** 3
        B += mpq(1, n * n)
        H += mpq(1, n)
        if n in need_k:
            A[n] = B * B - corr
        if sieve.mu[n]:
            m4 += mpq(sieve.mu[n], n ** 4)
        if n in need_d:
            mu4[n] = m4
    return blocks, A, mu4


def s2_moebius(Q: int, sieve: SieveTables | None = None, tables: PrefixTables | None = None,
               exact_ceiling: int = MOEBIUS_CEILING) -> mpq:
    """sum_{d <= Q} mu(d)/d^4 * A(Q // d), one A evaluation per quotient block.

    With ``tables`` (built with a sieve) each call costs O(sqrt Q); without
    them the needed prefixes are streamed in O(Q) with O(sqrt Q) memory.
    """
    _check_ceiling(Q, exact_ceiling, "moebius")
    if tables is not None:
        if tables.limit < Q:
            raise RangeError(f"Q={Q} exceeds prefix limit {tables.limit}")
        if tables.mu4 is None:
            raise ValueError("prefix tables were built without a sieve")
        mu4 = tables.mu4
        return sum(((mu4[hi] - mu4[lo - 1]) * A_exact(k, tables)
                    for lo, hi, k in quotient_blocks(Q)), mpq(0))
    if sieve is None:
        sieve = build_sieve(Q)
    sieve.check(Q, "Q")
    blocks, A, mu4 = _streamed_A_and_mu4(Q, sieve)
    return sum(((mu4[hi] - mu4[lo - 1]) * A[k] for lo, hi, k in blocks), mpq(0))


@dataclass(frozen=True)
class S2Result:
    Q: int
    value: mpq
    method: str
    elapsed: float


def compute_s2(Q: int, method: str = "moebius", *, sieve=None, tables=None,
               exact_ceiling: int | None = None) -> S2Result:
    start = time.perf_counter()
    if method == "direct":
        value = s2_direct(Q, exact_ceiling or DIRECT_CEILING)
    elif method == "omega":
        value = s2_omega(Q, exact_ceiling or DIRECT_CEILING)
    elif method == "moebius":
        value = s2_moebius(Q, sieve, tables, exact_ceiling or MOEBIUS_CEILING)
    else:
        raise ValueError(f"unknown method {method!r}")
    return S2Result(Q, value, method, time.perf_counter() - start)


def s2_general(Q: int, interval: RationalInterval, h: int = 1) -> mpq:
    """sum_j (g[j+h] - g[j])^2 over the order-Q Farey fractions g in (lo, hi].

    The index runs to N_I(Q) - h so that g[j+h] exists.
    """
    if Q < 2:
        raise ValueError("Q must be >= 2")
    if h < 1:
        raise ValueError("h must be >= 1")
    values = [f.value for f in farey_iter_interval(Q, interval)]
    if len(values) < h + 1:
        raise EmptyIntervalError(
            f"{len(values)} fractions of order {Q} in {interval}, need at least {h + 1}")
    return sum(((values[j + h] - values[j]) ** 2 for j in range(len(values) - h)), mpq(0))


def C_of_QI(Q: int, interval: RationalInterval,
            precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of S_{2,1,I}(Q) * Q^2 / (|I| log Q)."""
    if not isinstance(interval, RationalInterval):
        interval = RationalInterval.make(*interval)
    exact = s2_general(Q, interval, 1) * Q * Q / interval.length
    return rational_to_interval(exact, precision) / interval_log(
        rational_to_interval(Q, precision))
