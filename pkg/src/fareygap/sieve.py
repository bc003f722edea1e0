"""Linear sieve for the Moebius function and Euler's totient, plus the
weighted sums built on them."""
from __future__ import annotations

import math
import os
from array import array
from contextlib import contextmanager
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import RangeError, ResourceLimitError

# overridable with FAREYGAP_MAX_SIEVE
DEFAULT_MAX_SIEVE = 20_000_000


_cap_override: int | None = None


def max_sieve_limit() -> int:
    if _cap_override is not None:
        return _cap_override
    value = os.environ.get("FAREYGAP_MAX_SIEVE")
    return int(value) if value else DEFAULT_MAX_SIEVE


@contextmanager
def sieve_cap(limit: int | None):
    """Temporarily replace the sieve cap (None leaves it unchanged)."""
    global _cap_override
    previous = _cap_override
    if limit is not None:
        _cap_override = limit
    try:
        yield
    finally:
        _cap_override = previous


@dataclass(frozen=True)
class SieveTables:
    """mu and phi for 1..limit; index 0 is an unused placeholder."""

    limit: int
    mu: array
    phi: array

    def check(self, n: int, what: str = "argument"):
        if n > self.limit:
            raise RangeError(f"{what} {n} exceeds sieve limit {self.limit}")


def build_sieve(limit: int, max_limit: int | None = None) -> SieveTables:
    if limit < 1:
        raise ValueError("sieve limit must be >= 1")
    cap = max_sieve_limit() if max_limit is None else max_limit
    if limit > cap:
        raise ResourceLimitError(f"sieve limit {limit} exceeds configured cap {cap}")

    mu = [0] * (limit + 1)
    phi = [0] * (limit + 1)
    mu[1] = phi[1] = 1
    composite = bytearray(limit + 1)
    primes = []
    for i in range(2, limit + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
            phi[i] = i - 1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            composite[ip] = 1
            if i % p == 0:
                phi[ip] = phi[i] * p
                break
            mu[ip] = -mu[i]
            phi[ip] = phi[i] * (p - 1)

    typecode = "l" if limit < 2**31 else "q"
    return SieveTables(limit, array("b", mu), array(typecode, phi))


def weighted_mertens(N: int, tables: SieveTables) -> mpq:
    """Exact sum_{d <= N} mu(d)/d."""
    tables.check(N, "N")
    L = math.lcm(*range(1, N + 1))
    mu = tables.mu
    total = sum(mu[d] * (L // d) for d in range(1, N + 1) if mu[d])
    return mpq(total, L)


def first_weighted_mertens_violation(N: int, tables: SieveTables) -> int | None:
    """Smallest n <= N with |sum_{d<=n} mu(d)/d| > 1, or None.

    Every prefix is checked exactly, carried as numerator over lcm(1..n).
    """
    tables.check(N, "N")
    mu = tables.mu
    num, L = 0, 1
    for n in range(1, N + 1):
        g = math.gcd(L, n)
        if g != n:
            scale = n // g
            num *= scale
            L *= scale
        if mu[n]:
            num += mu[n] * (L // n)
        if abs(num) > L:
            return n
    return None


def U(x: int, tables: SieveTables) -> mpq:
    """Exact sum_{d <= x} mu(d)/d * (x/d - floor(x/d) - 1/2)."""
    tables.check(x, "x")
    mu = tables.mu
    total = mpq(0)
    for d in range(1, x + 1):
        if mu[d]:
            # mu/d * ((x mod d)/d - 1/2) = mu * (2(x mod d) - d) / (2 d^2)
            total += mpq(mu[d] * (2 * (x % d) - d), 2 * d * d)
    return total


def farey_count(Q: int, tables: SieveTables) -> int:
    """|F_Q| counting both endpoints 0/1 and 1/1."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    tables.check(Q, "Q")
    return 1 + sum(tables.phi[1:Q + 1])
