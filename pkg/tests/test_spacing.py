from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from fareygap.errors import EmptyIntervalError, RangeError, ResourceLimitError
from fareygap.sieve import build_sieve
from fareygap.spacing import (A_bruteforce, A_exact, C_of_QI, build_prefix_tables,
                              compute_s2, quotient_blocks, s2_direct, s2_general, s2_moebius,
                              s2_omega)
from fareygap.stream import RationalInterval


def brute_farey(Q):
    return sorted({Fraction(a, q) for q in range(1, Q + 1) for a in range(0, q + 1)})


def brute_s2(Q):
    g = brute_farey(Q)
    return sum((y - x) ** 2 for x, y in zip(g, g[1:]))


@pytest.fixture(scope="module")
def tables():
    return build_prefix_tables(400, build_sieve(400))


@pytest.mark.parametrize("Q, expected", [(2, Fraction(1, 2)), (3, Fraction(5, 18)),
                                         (4, Fraction(7, 36)), (10, Fraction(49, 1080))])
def test_s2_examples(Q, expected):
    assert brute_s2(Q) == expected
    for f in (s2_direct, s2_omega, s2_moebius):
        assert f(Q) == expected, f.__name__


def test_methods_match_brute_force():
    for Q in range(2, 41):
        expected = brute_s2(Q)
        assert s2_direct(Q) == s2_omega(Q) == s2_moebius(Q) == expected


def test_streamed_and_tabled_moebius_agree(tables):
    sieve = build_sieve(400)
    for Q in list(range(2, 60)) + [199, 256, 400]:
        assert s2_moebius(Q, sieve) == s2_moebius(Q, tables=tables)


def test_s2_decreasing_and_bounded(tables):
    prev = None
    for Q in range(2, 401):
        v = s2_moebius(Q, tables=tables)
        assert 0 < v < 1
        if prev is not None:
            assert v < prev
        prev = v


@pytest.mark.parametrize("k, expected", [(1, Fraction(1)), (2, Fraction(9, 16)),
                                         (3, Fraction(457, 1296))])
def test_A_examples(tables, k, expected):
    assert A_bruteforce(k) == expected
    assert A_exact(k, tables) == expected


def test_A_matches_double_sum(tables):
    for k in range(1, 80):
        assert A_exact(k, tables) == A_bruteforce(k)


def test_A_complement_identity(tables):
    # pairs with m + n <= k are the complement of A(k) in the full square
    for k in range(1, 60):
        low = sum(Fraction(1, (m * n) ** 2) for m in range(1, k) for n in range(1, k + 1 - m))
        B = tables.B[k]
        assert A_exact(k, tables) == Fraction(int(B.numerator), int(B.denominator)) ** 2 - low


def test_A_range(tables):
    with pytest.raises(RangeError):
        A_exact(401, tables)
    with pytest.raises(ValueError):
        A_exact(0, tables)


@given(st.integers(1, 3000))
def test_quotient_blocks_partition(Q):
    blocks = list(quotient_blocks(Q))
    assert blocks[0][0] == 1 and blocks[-1][1] == Q
    for (lo, hi, k), nxt in zip(blocks, blocks[1:] + [None]):
        assert all(Q // d == k for d in (lo, hi))
        if nxt:
            assert nxt[0] == hi + 1 and nxt[2] < k


def test_ceilings():
    with pytest.raises(ResourceLimitError):
        s2_direct(50, exact_ceiling=40)
    with pytest.raises(ResourceLimitError):
        s2_omega(50, exact_ceiling=40)
    with pytest.raises(ResourceLimitError):
        s2_moebius(50, exact_ceiling=40)
    with pytest.raises(ResourceLimitError):
        build_prefix_tables(100, max_limit=50)


def test_tables_without_sieve_rejected():
    with pytest.raises(ValueError):
        s2_moebius(10, tables=build_prefix_tables(10))


def test_small_Q_rejected():
    with pytest.raises(ValueError):
        s2_direct(1)


def test_compute_s2_dispatch():
    for m in ("direct", "omega", "moebius"):
        r = compute_s2(7, m)
        assert r.value == brute_s2(7) and r.method == m and r.elapsed >= 0
    with pytest.raises(ValueError):
        compute_s2(7, "guess")


def test_s2_general_full_interval_is_s2_minus_first_gap():
    full = RationalInterval.make(0, 1)
    for Q in range(2, 30):
        assert s2_general(Q, full) == brute_s2(Q) - Fraction(1, Q * Q)


@pytest.mark.parametrize("Q, lo, hi, h, expected", [
    (3, 0, 1, 1, Fraction(1, 6)),
    (3, 0, 1, 2, Fraction(13, 36)),
    (5, 0, Fraction(1, 2), 1, Fraction(1, 400) + Fraction(1, 144) + Fraction(1, 225)
     + Fraction(1, 100)),
])
def test_s2_general_examples(Q, lo, hi, h, expected):
    assert s2_general(Q, RationalInterval.make(lo, hi), h) == expected


@settings(max_examples=60)
@given(st.integers(2, 40), st.integers(1, 4), st.fractions(0, 1, max_denominator=60),
       st.fractions(0, 1, max_denominator=60))
def test_s2_general_matches_brute_force(Q, h, x, y):
    if x == y:
        return
    lo, hi = min(x, y), max(x, y)
    g = [v for v in brute_farey(Q) if lo < v <= hi]
    I = RationalInterval.make(lo, hi)
    if len(g) < h + 1:
        with pytest.raises(EmptyIntervalError):
            s2_general(Q, I, h)
    else:
        assert s2_general(Q, I, h) == sum((g[j + h] - g[j]) ** 2 for j in range(len(g) - h))


def test_s2_general_errors():
    with pytest.raises(EmptyIntervalError):
        s2_general(3, RationalInterval.parse("1/3:2/5"))
    with pytest.raises(ValueError):
        s2_general(3, RationalInterval.make(0, 1), 0)


def test_C_of_QI_example():
    C = C_of_QI(2, RationalInterval.make(0, 1))
    # two fractions 1/2, 1 in (0, 1]: gap^2 = 1/4, times 4 over log 2
    import mpmath
    mpmath.mp.prec = 200
    ref = 1 / mpmath.log(2)
    lo, hi = C.bounds()
    # dyadic endpoints convert exactly
    as_mpf = lambda r: mpmath.mpf(int(r.numerator)) / int(r.denominator)
    assert as_mpf(lo) <= ref <= as_mpf(hi)
    assert hi - lo < mpq(1, 10**36)
    assert C_of_QI(2, (0, 1)).bounds() == C.bounds()
