"""Streaming enumeration of Farey fractions of order Q on [0, 1]."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, NamedTuple

from gmpy2 import mpq

from .errors import DomainError
from .numeric import to_rational


class FareyFraction(NamedTuple):
    num: int
    den: int

    @property
    def value(self) -> mpq:
        return mpq(self.num, self.den)

    def __str__(self):
        return f"{self.num}/{self.den}"


class RationalInterval(NamedTuple):
    """Half-open interval (lo, hi] with exact rational endpoints."""

    lo: mpq
    hi: mpq

    @classmethod
    def make(cls, lo, hi) -> "RationalInterval":
        lo, hi = to_rational(lo), to_rational(hi)
        if not 0 <= lo < hi <= 1:
            raise DomainError(f"need 0 <= lo < hi <= 1, got ({lo}, {hi}]")
        return cls(lo, hi)

    @classmethod
    def parse(cls, spec: str) -> "RationalInterval":
        """Parse ``"a/b:c/d"``."""
        try:
            lo, hi = spec.split(":")
            return cls.make(Fraction(lo.strip()), Fraction(hi.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"bad interval spec {spec!r}: {exc}") from None

    @property
    def length(self) -> mpq:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo < to_rational(x) <= self.hi

    def __str__(self):
        return f"({self.lo}, {self.hi}]"


def _walk(Q: int, a: int, b: int, c: int, d: int) -> Iterator[FareyFraction]:
    # (a/b, c/d) consecutive in F_Q; yields c/d and every later term
    yield FareyFraction(c, d)
    while c != d:
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield FareyFraction(c, d)


def farey_iter(Q: int) -> Iterator[FareyFraction]:
    """Yield 0/1, 1/Q, ..., 1/1 in increasing order using O(1) state."""
    if Q < 1:
        raise DomainError("Q must be >= 1")
    yield FareyFraction(0, 1)
    yield from _walk(Q, 0, 1, 1, Q)


def neighbor_pairs(Q: int) -> Iterator[tuple[int, int]]:
    """Denominators (q, q') of each consecutive pair of F_Q, in order."""
    if Q < 2:
        raise DomainError("Q must be >= 2")
    b, d = 1, Q
    yield b, d
    while d != 1:
        k = (Q + b) // d
        b, d = d, k * d - b
        yield b, d


def farey_predecessor_pair(Q: int, x) -> tuple[FareyFraction, FareyFraction]:
    """Consecutive pair (left, right) of F_Q with left <= x < right.

    Stern-Brocot descent toward x with runs of identical moves batched,
    so the cost is logarithmic in Q rather than linear.
    """
    x = to_rational(x)
    if not 0 <= x < 1:
        raise DomainError("x must satisfy 0 <= x < 1")
    p, q = int(x.numerator), int(x.denominator)
    a, b, c, d = 0, 1, 1, 1
    while b + d <= Q:
        # sign of mediant - x decides the direction
        if (a + c) * q <= p * (b + d):
            # move left bound: a/b += t*(c/d) while staying <= x
            gap_right = c * q - p * d  # > 0 since c/d > x
            gap_left = p * b - a * q  # >= 0
            t = gap_left // gap_right
            t = min(max(t, 1), (Q - b) // d)
            a, b = a + t * c, b + t * d
        else:
            gap_right = c * q - p * d
            gap_left = p * b - a * q
            if gap_left == 0:
                t = (Q - d) // b
            else:
                t = (gap_right - 1) // gap_left
            t = min(max(t, 1), (Q - d) // b)
            c, d = c + t * a, d + t * b
    return FareyFraction(a, b), FareyFraction(c, d)


def farey_iter_interval(Q: int, interval: RationalInterval) -> Iterator[FareyFraction]:
    """Yield the order-Q Farey fractions g with lo < g <= hi, increasing."""
    if Q < 1:
        raise DomainError("Q must be >= 1")
    if not isinstance(interval, RationalInterval):
        interval = RationalInterval.make(*interval)
    left, right = farey_predecessor_pair(Q, interval.lo)
    hi = interval.hi
    for frac in _walk(Q, left.num, left.den, right.num, right.den):
        if frac.num * hi.denominator > hi.numerator * frac.den:
            return
        yield frac


try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(f):
        return f


@njit
def stream_length(Q):
    """Number of terms the order-Q recurrence produces (compiled twin of farey_iter)."""
    b, d = 1, Q
    n = 2
    while d != 1:
        s = Q + b
        k = 1 if s < 2 * d else s // d
        b, d = d, k * d - b
        n += 1
    return n


@njit
def stream_lengths(Q_max, out):
    for Q in range(1, Q_max + 1):
        out[Q] = stream_length(Q)
