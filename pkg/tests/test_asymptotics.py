import mpmath
import pytest
from gmpy2 import mpq

from fareygap.asymptotics import (C_of_Q, G, G_decreasing_certificate, G_prime, _certify,
                                  classical_main_term, kanemitsu_refined_residual, main_term,
                                  r14_bound, secondary_coefficient, verify_conjecture,
                                  verify_theorem2)
from fareygap.errors import DomainError
from fareygap.numeric import constants
from fareygap.sieve import build_sieve

mpmath.mp.prec = 300


def _mp(r):
    return mpmath.mpf(int(r.numerator)) / int(r.denominator)


def encloses(iv, ref):
    lo, hi = iv.bounds()
    return _mp(lo) <= ref <= _mp(hi)


def ref_main(Q):
    pi2 = mpmath.pi ** 2
    z2 = pi2 / 6
    zp = mpmath.zeta(2, derivative=1)
    return (12 * mpmath.log(Q) / pi2 - 2 * zp / z2 ** 2 + (2 * mpmath.euler + 1) * 6 / pi2) / Q ** 2


def ref_r14(Q):
    L = mpmath.log(Q)
    return (64 * L ** 2 + 106 * L + 269) / mpmath.mpf(Q) ** 3


def ref_G(x):
    x = mpmath.mpf(x)
    L = mpmath.log(x)
    pi2 = mpmath.pi ** 2
    c = -2 * mpmath.zeta(2, derivative=1) / (pi2 / 6) ** 2 + (2 * mpmath.euler + 1) * 6 / pi2
    return 12 / pi2 + c / L + 64 * L / x + 106 / x + 269 / (x * L)


@pytest.mark.parametrize("Q", [2, 3, 10, 374, 1000, 10**6])
def test_main_term_matches_reference(Q):
    assert encloses(main_term(Q), ref_main(Q))


def test_frozen_values():
    assert abs(_mp(main_term(2).bounds()[0]) - mpmath.mpf("0.7113731442866233284218")) < 1e-21
    assert abs(_mp(r14_bound(2).bounds()[0]) - mpmath.mpf("46.65282425376488674712")) < 1e-18
    assert abs(_mp(r14_bound(1000).bounds()[0])
               - mpmath.mpf("4.055115371207663781601e-6")) < 1e-24
    assert abs(_mp(G(2).bounds()[0]) - mpmath.mpf("273.3283708074194302253")) < 1e-18
    assert abs(_mp(G(374).bounds()[0]) - mpmath.mpf("2.972516336831626121906")) < 1e-18
    assert abs(_mp(G(10**6).bounds()[0]) - mpmath.mpf("1.361826057066554394096")) < 1e-18


@pytest.mark.parametrize("Q", [2, 5, 100, 2000])
def test_r14_matches_reference(Q):
    assert encloses(r14_bound(Q), ref_r14(Q))


@pytest.mark.parametrize("x", [2, 3, 374, 10**4, 10**6, mpq(1001, 2)])
def test_G_matches_reference(x):
    assert encloses(G(x), ref_G(_mp(mpq(x))))


@pytest.mark.parametrize("x", [2, 10, 374, 10**5])
def test_G_prime_matches_numeric_derivative(x):
    ref = mpmath.diff(ref_G, mpmath.mpf(x))
    lo, hi = G_prime(x).bounds()
    assert abs(ref - _mp(lo)) <= mpmath.mpf(10) ** -30 * abs(ref)


def test_G_prime_negative_on_window():
    assert G_decreasing_certificate(374, 10**6)
    assert G_decreasing_certificate(2, 400)


def test_G_checkpoint():
    assert G(374).lt(3) is True
    # first integer where the bounding function drops below 3
    assert G(367).lt(3) is True and G(366).lt(3) is False


def test_secondary_coefficient_positive():
    assert secondary_coefficient(constants()).lo > 0


def test_domain_errors():
    for f in (main_term, classical_main_term, r14_bound, C_of_Q):
        with pytest.raises(DomainError):
            f(1)
    with pytest.raises(DomainError):
        G(1)
    with pytest.raises(DomainError):
        G_decreasing_certificate(10, 10)


def test_classical_form_overlaps(s2_table):
    for Q in (2, 3, 17, 500, 2000):
        d = main_term(Q) - classical_main_term(Q)
        assert d.contains(0)
        assert d.width < mpq(1, 10**40)


def test_error_bound_small_range(s2_table):
    for Q in range(2, 200):
        bd = verify_theorem2(Q, s2_table[Q])
        assert bd.pass_ and bd.decided
        assert bd.residual.hi <= bd.r14_bound.lo


def test_error_bound_computes_s2_when_missing():
    bd = verify_theorem2(10)
    assert bd.s2_exact == mpq(49, 1080) and bd.pass_


def test_C_values(s2_table):
    assert encloses(C_of_Q(2), 2 / mpmath.log(2))
    assert encloses(C_of_Q(3), mpmath.mpf(5) / 2 / mpmath.log(3))
    assert abs(_mp(C_of_Q(3).bounds()[0]) - mpmath.mpf("2.275598066567093484")) < 1e-18
    assert C_of_Q(3, s2_table[3]).bounds() == C_of_Q(3).bounds()


def test_G_bounds_C(s2_table):
    for Q in range(2, 2001, 7):
        assert C_of_Q(Q, s2_table[Q]).hi <= G(Q).lo


def test_refined_residual_example():
    r = kanemitsu_refined_residual(2)
    assert abs(_mp(r.bounds()[0]) - mpmath.mpf("-0.12472974671663016474")) < 1e-18


def test_refined_residual_shares_sieve(s2_table, sieve_2000):
    a = kanemitsu_refined_residual(300, sieve_2000, s2_table[300])
    b = kanemitsu_refined_residual(300)
    assert a.bounds() == b.bounds()


def test_certify_escalates():
    seen = []

    def check(c):
        seen.append(c.precision)
        return True if c.precision >= 512 else None

    outcome, c = _certify(check, 128, 1024)
    assert outcome is True
    assert [p - 32 for p in seen] == [128, 256, 512]


def test_certify_gives_up_at_ceiling():
    outcome, c = _certify(lambda c: None, 128, 256)
    assert outcome is None and c.precision == 256 + 32


def test_conjecture_default():
    r = verify_conjecture()
    assert r.verdict and not r.undecidable and r.failed_step is None
    assert r.exact_ok and r.g_checkpoint_ok and r.g_decreasing_ok
    assert r.argmax_Q == 2 and r.argmax_certified
    assert encloses(r.max_C, 2 / mpmath.log(2))
    assert len(r.C_values) == 499


def test_conjecture_checkpoint_just_past_exact_range():
    assert verify_conjecture(373, 374).verdict


def test_conjecture_gap_in_coverage():
    r = verify_conjecture(372, 374)
    assert not r.verdict and r.failed_step == "configuration" and not r.undecidable


def test_conjecture_bad_checkpoint():
    r = verify_conjecture(100, 2)
    assert not r.verdict and r.failed_step == "G-checkpoint" and not r.undecidable
    assert r.g_checkpoint.lo >= 3


def test_conjecture_counterexample_from_injected_values():
    values = {Q: mpq(1, Q) for Q in range(2, 11)}
    r = verify_conjecture(10, 10, s2_values=values)
    # Q^2 S2 / log Q = Q / log Q reaches 3 near Q = 5
    assert not r.verdict and r.failed_step == "exact-range"
    assert r.counterexample == min(Q for Q in values if Q / mpmath.log(Q) >= 3)


def test_conjecture_same_on_threads():
    a = verify_conjecture(120, 121, threads=4)
    b = verify_conjecture(120, 121, threads=1)
    assert {Q: v.bounds() for Q, v in a.C_values.items()} == {
        Q: v.bounds() for Q, v in b.C_values.items()}


def test_conjecture_rejects_small_arguments():
    with pytest.raises(DomainError):
        verify_conjecture(1, 374)
