from fractions import Fraction as F

import mpmath
import pytest

from seqspace.scalar import Interval, format_fraction, get_digits, parse_scalar, precision


def test_default_precision():
    assert get_digits() == 50


def test_precision_context_restores():
    with precision(30):
        assert get_digits() == 30
    assert get_digits() == 50


def test_exact_rational_is_point():
    iv = Interval.exact(F(1, 4))
    assert iv.is_point and iv.mid() == F(1, 4)


def test_log_encloses_mpmath():
    iv = Interval.exact(2).log()
    with mpmath.workdps(80):
        ref = mpmath.log(2)
        assert mpmath.mpf(iv.lo_fraction().numerator) / iv.lo_fraction().denominator <= ref
        assert mpmath.mpf(iv.hi_fraction().numerator) / iv.hi_fraction().denominator >= ref
    assert iv.width() < F(1, 10**48)


def test_sqrt_and_pi_enclosures():
    assert (Interval.exact(2).sqrt() * Interval.exact(2).sqrt()).contains(2)
    pi = Interval.pi()
    below = F(31415926535897932384626433832795028841971, 10**40)
    assert below < pi.lo_fraction() and pi.hi_fraction() < below + F(1, 10**40)
    assert pi.width() < F(1, 10**48)


def test_division_by_interval_with_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Interval.exact(1) / Interval.hull_of(-1, 1)


def test_ordering_helpers():
    a, b = Interval.exact(1), Interval.exact(2).log()
    assert b.certainly_lt(a)
    assert not a.certainly_le(b)
    assert a.hull(b).contains(F(9, 10))


@pytest.mark.parametrize("text,q", [("1/3", F(1, 3)), ("0.25", F(1, 4)), ("-2", F(-2)), ("1e-3", F(1, 1000))])
def test_parse_scalar(text, q):
    assert parse_scalar(text) == q


def test_format_fraction_terminating_vs_not():
    assert format_fraction(F(1, 4)) == "0.25"
    assert format_fraction(F(1, 3)) == "1/3"
    assert parse_scalar(format_fraction(F(-7, 12))) == F(-7, 12)
