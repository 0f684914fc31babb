"""Exact rationals and outward-rounded intervals.

Sequence entries are always :class:`fractions.Fraction`.  Anything that is not
rational (logarithms, square roots, pi) is enclosed in an :class:`Interval`
whose endpoints are binary floats rounded outward at the working precision.
The working precision is a context variable, so nested computations can raise
it locally without touching global state.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from fractions import Fraction
from typing import Union

from mpmath import libmp, mp

DEFAULT_DIGITS = 50

_digits: contextvars.ContextVar[int] = contextvars.ContextVar("seqspace_digits", default=DEFAULT_DIGITS)

Rational = Union[int, Fraction]


def get_digits() -> int:
    return _digits.get()


def prec_bits(digits: int | None = None) -> int:
    d = get_digits() if digits is None else digits
    return int(math.ceil(d * 3.321928094887362)) + 16


@contextmanager
def precision(digits: int):
    """Run a block with ``digits`` significant decimal digits."""
    if digits < 1:
        raise ValueError("precision must be positive")
    token = _digits.set(int(digits))
    try:
        yield
    finally:
        _digits.reset(token)


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, tuple):
        p, q = libmp.to_rational(v)
        return Fraction(int(p), int(q))
    if hasattr(v, "_mpf_"):
        p, q = libmp.to_rational(v._mpf_)
        return Fraction(int(p), int(q))
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


def _raw_from_rational(q: Fraction, prec: int, rnd: str):
    return libmp.from_rational(q.numerator, q.denominator, prec, rnd)


def _widen(raw, prec: int, up: bool):
    # one extra ulp for transcendental kernels
    if raw in (libmp.finf, libmp.fninf, libmp.fzero):
        return raw
    _, man, exp, bc = raw
    ulp = libmp.from_man_exp(1, exp + bc - prec - 1)
    return libmp.mpf_add(raw, ulp, prec, "c") if up else libmp.mpf_sub(raw, ulp, prec, "f")


class Interval:
    """Closed interval ``[lo, hi]`` of extended reals, rounded outward."""

    __slots__ = ("lo_raw", "hi_raw")

    def __init__(self, lo_raw, hi_raw):
        if libmp.mpf_lt(hi_raw, lo_raw):
            raise ValueError("interval with lo > hi")
        self.lo_raw = lo_raw
        self.hi_raw = hi_raw

    # construction -----------------------------------------------------
    @classmethod
    def exact(cls, q) -> "Interval":
        if isinstance(q, Interval):
            return q
        q = as_fraction(q)
        prec = prec_bits()
        if q.denominator == 1:
            raw = libmp.from_int(q.numerator)
            if raw[3] <= prec:
                return cls(raw, raw)
        return cls(_raw_from_rational(q, prec, "f"), _raw_from_rational(q, prec, "c"))

    @classmethod
    def hull_of(cls, lo, hi) -> "Interval":
        a, b = cls.exact(lo), cls.exact(hi)
        return cls(_min(a.lo_raw, b.lo_raw), _max(a.hi_raw, b.hi_raw))

    @classmethod
    def infinite(cls) -> "Interval":
        return cls(libmp.finf, libmp.finf)

    @classmethod
    def pi(cls) -> "Interval":
        prec = prec_bits()
        return cls(_widen(libmp.mpf_pi(prec, "f"), prec, False), _widen(libmp.mpf_pi(prec, "c"), prec, True))

    @classmethod
    def euler_gamma(cls) -> "Interval":
        prec = prec_bits()
        return cls(_widen(libmp.mpf_euler(prec, "f"), prec, False),
                   _widen(libmp.mpf_euler(prec, "c"), prec, True))

    # accessors --------------------------------------------------------
    @property
    def lo(self):
        return mp.make_mpf(self.lo_raw)

    @property
    def hi(self):
        return mp.make_mpf(self.hi_raw)

    @property
    def is_point(self) -> bool:
        return self.lo_raw == self.hi_raw

    @property
    def is_finite(self) -> bool:
        return self.hi_raw not in (libmp.finf, libmp.fninf) and self.lo_raw not in (libmp.finf, libmp.fninf)

    def width(self) -> Fraction:
        return as_fraction(self.hi_raw) - as_fraction(self.lo_raw)

    def mid(self) -> Fraction:
        return (as_fraction(self.hi_raw) + as_fraction(self.lo_raw)) / 2

    def lo_fraction(self) -> Fraction:
        return as_fraction(self.lo_raw)

    def hi_fraction(self) -> Fraction:
        return as_fraction(self.hi_raw)

    def contains(self, v) -> bool:
        if isinstance(v, Interval):
            return libmp.mpf_le(self.lo_raw, v.lo_raw) and libmp.mpf_le(v.hi_raw, self.hi_raw)
        q = as_fraction(v)
        return self._lo_le(q) and self._hi_ge(q)

    def _lo_le(self, q: Fraction) -> bool:
        if self.lo_raw == libmp.fninf:
            return True
        if self.lo_raw == libmp.finf:
            return False
        return as_fraction(self.lo_raw) <= q

    def _hi_ge(self, q: Fraction) -> bool:
        if self.hi_raw == libmp.finf:
            return True
        if self.hi_raw == libmp.fninf:
            return False
        return as_fraction(self.hi_raw) >= q

    def intersects(self, other: "Interval") -> bool:
        return libmp.mpf_le(self.lo_raw, other.hi_raw) and libmp.mpf_le(other.lo_raw, self.hi_raw)

    def certainly_le(self, other) -> bool:
        other = Interval.exact(other)
        return libmp.mpf_le(self.hi_raw, other.lo_raw)

    def certainly_lt(self, other) -> bool:
        other = Interval.exact(other)
        return libmp.mpf_lt(self.hi_raw, other.lo_raw)

    def hull(self, other) -> "Interval":
        other = Interval.exact(other)
        return Interval(_min(self.lo_raw, other.lo_raw), _max(self.hi_raw, other.hi_raw))

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = Interval.exact(other)
        prec = prec_bits()
        return Interval(libmp.mpf_add(self.lo_raw, other.lo_raw, prec, "f"),
                        libmp.mpf_add(self.hi_raw, other.hi_raw, prec, "c"))

    __radd__ = __add__

    def __neg__(self):
        return Interval(libmp.mpf_neg(self.hi_raw), libmp.mpf_neg(self.lo_raw))

    def __sub__(self, other):
        return self + (-Interval.exact(other))

    def __rsub__(self, other):
        return Interval.exact(other) + (-self)

    def __mul__(self, other):
        other = Interval.exact(other)
        prec = prec_bits()
        ends = [(a, b) for a in (self.lo_raw, self.hi_raw) for b in (other.lo_raw, other.hi_raw)]
        lows = [libmp.mpf_mul(a, b, prec, "f") for a, b in ends]
        highs = [libmp.mpf_mul(a, b, prec, "c") for a, b in ends]
        return Interval(_min(*lows), _max(*highs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Interval.exact(other)
        if not (libmp.mpf_lt(libmp.fzero, other.lo_raw) or libmp.mpf_lt(other.hi_raw, libmp.fzero)):
            raise ZeroDivisionError("interval divisor contains zero")
        prec = prec_bits()
        ends = [(a, b) for a in (self.lo_raw, self.hi_raw) for b in (other.lo_raw, other.hi_raw)]
        lows = [_div(a, b, prec, "f") for a, b in ends]
        highs = [_div(a, b, prec, "c") for a, b in ends]
        return Interval(_min(*lows), _max(*highs))

    def __rtruediv__(self, other):
        return Interval.exact(other) / self

    def log(self) -> "Interval":
        if not libmp.mpf_lt(libmp.fzero, self.lo_raw):
            raise ValueError("log of a non-positive interval")
        prec = prec_bits()
        lo = _widen(libmp.mpf_log(self.lo_raw, prec, "f"), prec, False)
        hi = _widen(libmp.mpf_log(self.hi_raw, prec, "c"), prec, True)
        return Interval(lo, hi)

    def sqrt(self) -> "Interval":
        if libmp.mpf_lt(self.lo_raw, libmp.fzero):
            raise ValueError("sqrt of a negative interval")
        prec = prec_bits()
        return Interval(libmp.mpf_sqrt(self.lo_raw, prec, "f"), libmp.mpf_sqrt(self.hi_raw, prec, "c"))

    def pow_fraction(self, p: Fraction) -> "Interval":
        """``self ** p`` for non-negative intervals and rational ``p > 0``."""
        p = as_fraction(p)
        if libmp.mpf_lt(self.lo_raw, libmp.fzero):
            raise ValueError("fractional power of a negative interval")
        prec = prec_bits()
        if p.denominator == 1:
            n = p.numerator
            return Interval(libmp.mpf_pow_int(self.lo_raw, n, prec, "f"), libmp.mpf_pow_int(self.hi_raw, n, prec, "c"))
        if self.lo_raw == libmp.fzero and self.hi_raw == libmp.fzero:
            return self
        # x**p = exp(p log x); monotone increasing in x for p > 0
        e = Interval.exact(p)
        lo = _exp_down(_mul_lo(e, _log_lo(self.lo_raw, prec), prec), prec) if self.lo_raw != libmp.fzero else libmp.fzero
        hi = _exp_up(_mul_hi(e, _log_hi(self.hi_raw, prec), prec), prec)
        return Interval(lo, hi)

    def __repr__(self) -> str:
        return f"Interval({libmp.to_str(self.lo_raw, 20)}, {libmp.to_str(self.hi_raw, 20)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo_raw == other.lo_raw and self.hi_raw == other.hi_raw

    def __hash__(self) -> int:
        return hash((self.lo_raw, self.hi_raw))


def _min(*xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_lt(x, best):
            best = x
    return best


def _max(*xs):
    best = xs[0]
    for x in xs[1:]:
        if libmp.mpf_lt(best, x):
            best = x
    return best


def _div(a, b, prec, rnd):
    if b in (libmp.finf, libmp.fninf):
        if a in (libmp.finf, libmp.fninf):
            raise ValueError("inf / inf")
        return libmp.fzero
    return libmp.mpf_div(a, b, prec, rnd)


def _log_lo(raw, prec):
    return _widen(libmp.mpf_log(raw, prec, "f"), prec, False)


def _log_hi(raw, prec):
    return _widen(libmp.mpf_log(raw, prec, "c"), prec, True)


def _mul_lo(e: Interval, raw, prec):
    return _min(*(libmp.mpf_mul(a, raw, prec, "f") for a in (e.lo_raw, e.hi_raw)))


def _mul_hi(e: Interval, raw, prec):
    return _max(*(libmp.mpf_mul(a, raw, prec, "c") for a in (e.lo_raw, e.hi_raw)))


def _exp_down(raw, prec):
    return _widen(libmp.mpf_exp(raw, prec, "f"), prec, False)


def _exp_up(raw, prec):
    return _widen(libmp.mpf_exp(raw, prec, "c"), prec, True)


def log_interval(q) -> Interval:
    """Enclosure of ``ln(q)`` for a positive rational or integer."""
    return Interval.exact(q).log()


def sqrt_interval(q) -> Interval:
    return Interval.exact(q).sqrt()


def interval_sum(terms) -> Interval:
    total = Interval.exact(0)
    for t in terms:
        total = total + t
    return total


def interval_max(items) -> Interval:
    """Enclosure of the maximum of several enclosed values."""
    items = list(items)
    if not items:
        raise ValueError("max of no intervals")
    lo = _max(*(i.lo_raw for i in items))
    hi = _max(*(i.hi_raw for i in items))
    return Interval(lo, hi)


# --------------------------------------------------------------------------
# Decimal-string I/O.  Rationals with power-of-ten-compatible denominators are
# written as plain decimals, everything else as "p/q"; both parse back exactly.

def format_fraction(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(twos, fives)
    scaled = q * 10**k
    assert scaled.denominator == 1
    n = scaled.numerator
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(k + 1, "0")
    body = f"{digits[:-k]}.{digits[-k:]}".rstrip("0").rstrip(".")
    return sign + body


def parse_scalar(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"scalar must be a decimal string, got {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_directed(raw_or_q, digits: int, up: bool) -> str:
    """Decimal string with ``digits`` significant digits, rounded down or up."""
    if isinstance(raw_or_q, tuple):
        if raw_or_q == libmp.finf:
            return "inf"
        if raw_or_q == libmp.fninf:
            return "-inf"
    q = as_fraction(raw_or_q)
    if q == 0:
        return "0"
    mag = abs(q)
    e = math.floor(math.log10(mag.numerator) - math.log10(mag.denominator))
    # guard against float error in the exponent estimate
    while Fraction(10) ** e > mag:
        e -= 1
    while Fraction(10) ** (e + 1) <= mag:
        e += 1
    shift = digits - 1 - e
    scaled = q * Fraction(10) ** shift
    n = math.ceil(scaled) if up else math.floor(scaled)
    return format_fraction(Fraction(n) / Fraction(10) ** shift)


def interval_to_strings(iv: Interval, digits: int | None = None) -> list[str]:
    d = get_digits() if digits is None else digits
    return [format_directed(iv.lo_raw, d, up=False), format_directed(iv.hi_raw, d, up=True)]
