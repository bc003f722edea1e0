"""Exact rationals and outward-rounded interval arithmetic.

Rationals are GMP ``mpq`` values (always reduced). Interval endpoints are
MPFR floats; every endpoint is produced by an MPFR operation under an
explicit rounding direction, so each result encloses the exact value.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import DomainError

Rational = type(mpq(0))

DEFAULT_PRECISION = 128
MAX_PRECISION = 1024
# constants carry extra bits so their enclosures stay below 1e-40 at 128 bits
CONSTANT_GUARD_BITS = 32


@lru_cache(maxsize=None)
def _contexts(precision: int):
    down = gmpy2.context(precision=precision, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=precision, round=gmpy2.RoundUp)
    return down, up


def to_rational(x) -> Rational:
    """Coerce an int, Fraction, mpq or rational string to an exact mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if type(x).__name__ == "mpz":
        return mpq(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _exact(n: int) -> mpfr:
    return mpfr(n, max(int(n).bit_length(), 2))


def _round_rational(r: Rational, ctx) -> mpfr:
    return ctx.div(_exact(int(r.numerator)), _exact(int(r.denominator)))


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with MPFR endpoints.

    Arithmetic accepts other intervals or exact numbers (int, Fraction,
    mpq); exact operands are enclosed at the interval's precision first.
    The result precision is the larger of the two operand precisions.
    """

    lo: mpfr
    hi: mpfr
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x, precision: int = DEFAULT_PRECISION) -> "Interval":
        return rational_to_interval(to_rational(x), precision)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return rational_to_interval(to_rational(other), self.precision)

    def __add__(self, other):
        b = self._coerce(other)
        p = max(self.precision, b.precision)
        down, up = _contexts(p)
        return Interval(down.add(self.lo, b.lo), up.add(self.hi, b.hi), p)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        p = max(self.precision, b.precision)
        down, up = _contexts(p)
        return Interval(down.sub(self.lo, b.hi), up.sub(self.hi, b.lo), p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        down, up = _contexts(self.precision)
        return Interval(down.minus(self.hi), up.minus(self.lo), self.precision)

    def __mul__(self, other):
        b = self._coerce(other)
        p = max(self.precision, b.precision)
        down, up = _contexts(p)
        pairs = [(self.lo, b.lo), (self.lo, b.hi), (self.hi, b.lo), (self.hi, b.hi)]
        lo = min(down.mul(x, y) for x, y in pairs)
        hi = max(up.mul(x, y) for x, y in pairs)
        return Interval(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b.lo <= 0 <= b.hi:
            raise ZeroDivisionError(f"divisor interval [{b.lo}, {b.hi}] contains 0")
        p = max(self.precision, b.precision)
        down, up = _contexts(p)
        pairs = [(self.lo, b.lo), (self.lo, b.hi), (self.hi, b.lo), (self.hi, b.hi)]
        lo = min(down.div(x, y) for x, y in pairs)
        hi = max(up.div(x, y) for x, y in pairs)
        return Interval(lo, hi, p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        _, up = _contexts(self.precision)
        return Interval(mpfr(0), max(up.minus(self.lo), self.hi), self.precision)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("only non-negative integer powers are supported")
        base = abs(self) if n % 2 == 0 else self
        result = Interval.exact(1, self.precision)
        for _ in range(n):
            result = result * base
        return result

    @property
    def width(self) -> mpfr:
        return _contexts(self.precision)[1].sub(self.hi, self.lo)

    @property
    def mid(self) -> mpfr:
        ctx = gmpy2.context(precision=self.precision + 1)
        return ctx.div(ctx.add(self.lo, self.hi), 2)

    def bounds(self) -> tuple[Rational, Rational]:
        """Endpoints as exact rationals."""
        return mpq(self.lo), mpq(self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        r = to_rational(x)
        return mpq(self.lo) <= r <= mpq(self.hi)

    __contains__ = contains

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi),
                        max(self.precision, other.precision))

    def lt(self, other) -> bool | None:
        """Certified ``self < other``: True, False, or None when undecided."""
        b = self._coerce(other)
        if self.hi < b.lo:
            return True
        if self.lo >= b.hi:
            return False
        return None

    def le(self, other) -> bool | None:
        b = self._coerce(other)
        if self.hi <= b.lo:
            return True
        if self.lo > b.hi:
            return False
        return None

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi}, precision={self.precision})"


def rational_to_interval(r, precision: int = DEFAULT_PRECISION) -> Interval:
    """Smallest precision-bit enclosure of the exact rational ``r``."""
    r = to_rational(r)
    down, up = _contexts(precision)
    return Interval(_round_rational(r, down), _round_rational(r, up), precision)


def interval_log(x) -> Interval:
    """Outward-rounded natural logarithm of an interval (or exact positive number)."""
    if not isinstance(x, Interval):
        x = Interval.exact(x)
    if x.lo <= 0:
        raise DomainError(f"log of interval with lo={x.lo} <= 0")
    down, up = _contexts(x.precision)
    return Interval(down.log(x.lo), up.log(x.hi), x.precision)


def format_sci(x, digits: int, rounding: str = "nearest") -> str:
    """Scientific notation for an exact value, rounded 'down', 'up' or 'nearest'.

    Works on exact rationals so directed rounding survives into text.
    """
    q = mpq(x) if isinstance(x, mpfr) else to_rational(x)
    if digits < 1:
        raise ValueError("digits must be positive")
    if q == 0:
        return f"{0:.{digits - 1}f}e+00"
    neg = q < 0
    a = -q if neg else q
    n, d = int(a.numerator), int(a.denominator)
    e = len(str(n)) - len(str(d))
    if n * 10 ** max(-e, 0) < d * 10 ** max(e, 0):
        e -= 1
    shift = digits - 1 - e
    num = n * 10 ** max(shift, 0)
    den = d * 10 ** max(-shift, 0)
    m, rem = divmod(num, den)
    if rem:
        if rounding == "nearest":
            if 2 * rem >= den:
                m += 1
        elif (rounding == "up") != neg:
            m += 1
        elif rounding not in ("up", "down"):
            raise ValueError(f"unknown rounding {rounding!r}")
    if m >= 10 ** digits:
        m //= 10
        e += 1
    s = str(m)
    body = s[0] + ("." + s[1:] if digits > 1 else "")
    return f"{'-' if neg else ''}{body}e{e:+03d}"


def digits_for(precision: int) -> int:
    """Decimal significant digits that round-trip a precision-bit float."""
    return int(precision * 0.30103) + 2


# Truncated decimal expansions; the truncation error is below 10**-330.
_DIGITS_ERROR = mpq(1, 10 ** 330)
_GAMMA = (
    "0.577215664901532860606512090082402431042159335939923598805767234884867726"
    "77766467093694706329174674951463144724980708248096050401448654283622417399"
    "76449235362535003337429373377376739427925952582470949160087352039481656708"
    "53233151776611528621199501507984793745085705740029921354786146694029604325"
    "421519058775535267331399254012967420"
)
_ZETA_PRIME_2 = (
    "-0.93754825431584375370257409456786497789786028861482992588543348036044381"
    "13127075227936894151411515174931138211624163853505940417159617332471971851"
    "74912402688214443700163931015045107160373574873135295605713355259331805051"
    "48725347999847173975703175503026190734610082347006414139802299842431153485"
    "6105707655972552086501051643857775101"
)


def decimal_enclosure(digits: str, error: Rational, precision: int) -> Interval:
    centre = to_rational(digits)
    lo = rational_to_interval(centre - error, precision).lo
    hi = rational_to_interval(centre + error, precision).hi
    return Interval(lo, hi, precision)


def const_gamma(precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of the Euler-Mascheroni constant."""
    return decimal_enclosure(_GAMMA, _DIGITS_ERROR, precision)


def const_zeta_prime_2(precision: int = DEFAULT_PRECISION) -> Interval:
    """Enclosure of zeta'(2) = -sum_{n>=2} log(n)/n**2, width <= 2**(8 - precision)."""
    if precision < 64:
        raise DomainError("precision must be at least 64 bits")
    return decimal_enclosure(_ZETA_PRIME_2, _DIGITS_ERROR, precision)


def const_pi(precision: int = DEFAULT_PRECISION) -> Interval:
    down, up = _contexts(precision)
    return Interval(down.const_pi(), up.const_pi(), precision)


@dataclass(frozen=True)
class ConstantTable:
    gamma: Interval
    pi: Interval
    zeta2: Interval
    zeta4: Interval
    zeta_prime_2: Interval
    precision: int

    @property
    def twelve_over_pi2(self) -> Interval:
        return 12 / self.pi ** 2

    @property
    def zeta_prime_term(self) -> Interval:
        """-2 zeta'(2) / zeta(2)**2"""
        return -2 * self.zeta_prime_2 / self.zeta2 ** 2

    @property
    def gamma_term(self) -> Interval:
        """(2 gamma + 1) * 6 / pi**2"""
        return (2 * self.gamma + 1) * 6 / self.pi ** 2

    def items(self):
        return [
            ("pi", self.pi),
            ("gamma", self.gamma),
            ("zeta(2)", self.zeta2),
            ("zeta(4)", self.zeta4),
            ("zeta'(2)", self.zeta_prime_2),
            ("12/pi^2", self.twelve_over_pi2),
            ("-2zeta'(2)/zeta(2)^2", self.zeta_prime_term),
            ("(2gamma+1)6/pi^2", self.gamma_term),
        ]


@lru_cache(maxsize=16)
def constants(precision: int = DEFAULT_PRECISION) -> ConstantTable:
    """Shared constant table for a working precision (built once, read-only)."""
    p = precision + CONSTANT_GUARD_BITS
    pi = const_pi(p)
    return ConstantTable(
        gamma=const_gamma(p),
        pi=pi,
        zeta2=pi ** 2 / 6,
        zeta4=pi ** 4 / 90,
        zeta_prime_2=const_zeta_prime_2(p),
        precision=p,
    )
