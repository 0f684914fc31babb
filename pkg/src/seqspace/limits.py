"""Banach-limit estimators and the symmetric functional on m_Psi.

A Banach limit is not constructive, so everything here is an estimator.  Two
kinds of answers are produced:

* a *certified* value, when the input belongs to a structured family whose
  Banach limit is forced by the axioms alone (convergent sequences, periodic
  sequences, ratio sequences with a known limit);
* a *windowed* Cesaro value, whose interval is the spread of sub-window
  averages.  That interval is empirical: it says how settled the averages are,
  not where the true limit lies.

``EstimatorSpec.use_certificate`` chooses between them.  Residual reports never
claim that an axiom holds, they only measure it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Callable, Iterator, Union

from mpmath import libmp

from .algebra import neg_part, pos_part
from .errors import ConfigurationError, NonMemberError
from .rearrange import decreasing_rearrangement, rearranged_sum
from .scalar import Interval, _raw_from_rational, _widen, format_directed, format_fraction, prec_bits
from .sequences import MAX_PREFIX, ZERO, Blocks, Catalog, Finite, Periodic, Sequence
from .spaces import LogBase, PsiSpec, Table, marcinkiewicz_norm

Value = Union[Fraction, Interval]

# ---------------------------------------------------------------------------
# interval accumulation in raw mpf form (fast path for long windows)


class _Acc:
    __slots__ = ("lo", "hi", "prec", "exact")

    def __init__(self):
        self.prec = prec_bits()
        self.lo = self.hi = libmp.fzero
        self.exact: Fraction | None = ZERO

    def add(self, v: Value) -> None:
        if isinstance(v, Fraction):
            if self.exact is not None and v.denominator < 1 << 64:
                self.exact += v
                if self.exact.denominator >= 1 << 256:
                    self._flush()
                return
            lo = _raw_from_rational(v, self.prec, "f")
            hi = _raw_from_rational(v, self.prec, "c")
        else:
            lo, hi = v.lo_raw, v.hi_raw
        self._flush()
        self.lo = libmp.mpf_add(self.lo, lo, self.prec, "f")
        self.hi = libmp.mpf_add(self.hi, hi, self.prec, "c")

    def _flush(self) -> None:
        if self.exact is not None:
            q, self.exact = self.exact, None
            self.lo = libmp.mpf_add(self.lo, _raw_from_rational(q, self.prec, "f"), self.prec, "f")
            self.hi = libmp.mpf_add(self.hi, _raw_from_rational(q, self.prec, "c"), self.prec, "c")

    def result(self) -> Value:
        if self.exact is not None:
            return self.exact
        return Interval(self.lo, self.hi)


def _as_interval(v: Value) -> Interval:
    return v if isinstance(v, Interval) else Interval.exact(v)


def _divide(v: Value, d: int) -> Value:
    return v / d if isinstance(v, Fraction) else v / Interval.exact(d)


def _mul(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _as_interval(a) * _as_interval(b)


def _sub(a: Value, b: Value) -> Value:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return _as_interval(a) - _as_interval(b)


def abs_upper(v: Value) -> Fraction:
    """Exact upper bound on ``|v|``."""
    if isinstance(v, Fraction):
        return abs(v)
    return max(abs(v.lo_fraction()), abs(v.hi_fraction()))


# ---------------------------------------------------------------------------
# trajectories


class Trajectory:
    """A bounded real sequence ``n -> t_n`` that an estimator can average."""

    label = "trajectory"

    def term(self, n: int) -> Value:
        raise NotImplementedError

    def terms(self, start: int, count: int) -> Iterator[Value]:
        for n in range(start, start + count):
            yield self.term(n)

    def window_sum(self, m: int, W: int) -> Value:
        """``sum_{n=m+1}^{m+W} t_n``."""
        if m + W > MAX_PREFIX:
            raise ConfigurationError(f"window end {m + W} exceeds the evaluable prefix {MAX_PREFIX}")
        acc = _Acc()
        for v in self.terms(m + 1, W):
            acc.add(v)
        return acc.result()

    def certified_limit(self) -> Value | None:
        """Value every Banach limit must assign, if the structure forces one."""
        return None

    def sup_abs(self) -> Fraction | None:
        return None


@dataclass(frozen=True)
class SeqTrajectory(Trajectory):
    x: Sequence

    @property
    def label(self) -> str:
        return self.x.kind

    def term(self, n: int) -> Fraction:
        return self.x.term(n)

    def terms(self, start: int, count: int) -> Iterator[Value]:
        if isinstance(self.x, (Blocks, Finite)) or start + count > MAX_PREFIX:
            yield from super().terms(start, count)
        else:
            yield from self.x.prefix(start + count - 1)[start - 1:]

    def window_sum(self, m: int, W: int) -> Value:
        return seq_range_sum(self.x, m + 1, m + W)

    def certified_limit(self) -> Value | None:
        x = self.x
        if isinstance(x, (Finite, Catalog)):
            return ZERO
        if isinstance(x, Blocks):
            return x.tail
        if isinstance(x, Periodic):
            return sum(x.pattern, ZERO) / len(x.pattern)
        return None

    def sup_abs(self) -> Fraction:
        return self.x.sup_abs()


def seq_range_sum(x: Sequence, lo: int, hi: int) -> Value:
    """``sum_{n=lo}^{hi} x_n``, exact except for long catalog ranges."""
    if hi < lo:
        return ZERO
    if isinstance(x, Finite):
        return sum((v for i, v in x.entries if lo <= i <= hi), ZERO)
    if isinstance(x, Blocks):
        return _blocks_upto(x, hi) - _blocks_upto(x, lo - 1)
    if isinstance(x, Periodic):
        return _periodic_upto(x, hi) - _periodic_upto(x, lo - 1)
    if isinstance(x, Catalog):
        if hi > MAX_PREFIX:
            raise ConfigurationError(f"catalog window end {hi} exceeds the evaluable prefix {MAX_PREFIX}")
        if hi - lo < 2000:
            return sum((x.term(n) for n in range(lo, hi + 1)), ZERO)
        acc = _Acc()
        acc.exact = None
        prec = acc.prec
        c, a, b = x.coef, x.a, x.b
        patch = x._lookup
        for n in range(lo, hi + 1):
            v = patch.get(n)
            if v is not None:
                acc.add(v)
                continue
            den = a * n + b
            acc.lo = libmp.mpf_add(acc.lo, libmp.from_rational(c.numerator, c.denominator * den, prec, "f"), prec, "f")
            acc.hi = libmp.mpf_add(acc.hi, libmp.from_rational(c.numerator, c.denominator * den, prec, "c"), prec, "c")
        return acc.result()
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def _blocks_upto(x: Blocks, n: int) -> Fraction:
    return rearranged_sum(x, n) if n > 0 else ZERO


def _periodic_upto(x: Periodic, n: int) -> Fraction:
    if n <= 0:
        return ZERO
    p = len(x.prefix_values)
    if n <= p:
        return sum(x.prefix_values[:n], ZERO)
    full, part = divmod(n - p, len(x.pattern))
    return sum(x.prefix_values, ZERO) + full * sum(x.pattern, ZERO) + sum(x.pattern[:part], ZERO)


@dataclass(frozen=True)
class Dilated(Trajectory):
    """``D_2^k x``: term ``n`` is ``x_{ceil(n / 2^k)}``."""

    x: Sequence
    k: int

    @property
    def label(self) -> str:
        return f"D2^{self.k}({self.x.kind})"

    def term(self, n: int) -> Fraction:
        return self.x.term(-(-n >> self.k))

    def window_sum(self, m: int, W: int) -> Value:
        if W <= 0:
            return ZERO
        r = 1 << self.k
        j_lo, j_hi = -(-(m + 1) // r), -(-(m + W) // r)
        if j_lo == j_hi:
            return W * self.x.term(j_lo)
        head = (j_lo * r - m) * self.x.term(j_lo)
        tail = (m + W - (j_hi - 1) * r) * self.x.term(j_hi)
        mid = seq_range_sum(self.x, j_lo + 1, j_hi - 1)
        edge = head + tail
        return r * mid + edge if isinstance(mid, Fraction) else mid * Interval.exact(r) + Interval.exact(edge)

    def certified_limit(self) -> Value | None:
        # dilation keeps convergent sequences convergent and periodic means intact
        return SeqTrajectory(self.x).certified_limit()

    def sup_abs(self) -> Fraction:
        return self.x.sup_abs()


@dataclass(frozen=True)
class Shifted(Trajectory):
    base: Trajectory
    k: int = 1

    @property
    def label(self) -> str:
        return f"S^{self.k}({self.base.label})"

    def term(self, n: int) -> Value:
        return self.base.term(n + self.k)

    def terms(self, start: int, count: int) -> Iterator[Value]:
        return self.base.terms(start + self.k, count)

    def window_sum(self, m: int, W: int) -> Value:
        return self.base.window_sum(m + self.k, W)

    def certified_limit(self) -> Value | None:
        return self.base.certified_limit()

    def sup_abs(self) -> Fraction | None:
        return self.base.sup_abs()


@dataclass(frozen=True)
class Multiplier:
    """Convergent multiplier ``a_n = const + coef / (a n + b)``, with limit ``const``."""

    const: Fraction = Fraction(1)
    coef: Fraction = Fraction(1)
    a: int = 1
    b: int = 0

    def term(self, n: int) -> Fraction:
        return self.const + self.coef / (self.a * n + self.b)

    @property
    def limit(self) -> Fraction:
        return self.const

    def sup_abs(self) -> Fraction:
        # the correction term is monotone in n, so the extremes are n=1 and the limit
        return max(abs(self.const), abs(self.term(1)))


@dataclass(frozen=True)
class Product(Trajectory):
    mult: Multiplier
    base: Trajectory

    @property
    def label(self) -> str:
        return f"a*{self.base.label}"

    def term(self, n: int) -> Value:
        return _mul(self.mult.term(n), self.base.term(n))

    def terms(self, start: int, count: int) -> Iterator[Value]:
        for n, v in zip(range(start, start + count), self.base.terms(start, count)):
            yield _mul(self.mult.term(n), v)

    def certified_limit(self) -> Value | None:
        inner = self.base.certified_limit()
        return None if inner is None else _mul(self.mult.limit, inner)

    def sup_abs(self) -> Fraction | None:
        s = self.base.sup_abs()
        return None if s is None else s * self.mult.sup_abs()


@dataclass(frozen=True)
class Ratio(Trajectory):
    """``s_n(x) / Psi(n)``."""

    psi: PsiSpec
    x: Sequence

    @property
    def label(self) -> str:
        return f"ratio[{self.psi.label}]({self.x.kind})"

    @property
    def xstar(self) -> Sequence:
        return _rearranged(self.x)

    def s(self, n: int) -> Value:
        xs = self.xstar
        if isinstance(xs, Catalog):
            return seq_range_sum(xs, 1, n)
        return rearranged_sum(xs, n)

    def term(self, n: int) -> Value:
        s = self.s(n)
        q = self.psi.exact(n)
        if q is not None:
            return s / q if isinstance(s, Fraction) else s / Interval.exact(q)
        return _as_interval(s) / self.psi(n)

    def terms(self, start: int, count: int) -> Iterator[Value]:
        if isinstance(self.psi, Table):
            yield from super().terms(start, count)
            return
        xs = self.xstar
        acc_s = self.s(start - 1) if start > 1 else ZERO
        prec = prec_bits()
        ln_base = self.psi.log_base()
        for n in range(start, start + count):
            acc_s = _add_value(acc_s, xs.term(n))
            q = self.psi.exact(n)
            if q is not None:
                yield acc_s / q if isinstance(acc_s, Fraction) else acc_s / Interval.exact(q)
                continue
            arg = libmp.from_int(n + 1)
            lg = Interval(libmp.mpf_log(arg, prec, "f"), libmp.mpf_log(arg, prec, "c"))
            lg = Interval(_widen(lg.lo_raw, prec, False), _widen(lg.hi_raw, prec, True))
            if self.psi.base != "e":
                lg = lg / ln_base
            yield _as_interval(acc_s) / lg

    def window_sum(self, m: int, W: int) -> Value:
        if isinstance(self.psi, Table):
            return super().window_sum(m, W)
        if m + W > MAX_PREFIX:
            raise ConfigurationError(f"window end {m + W} exceeds the evaluable prefix {MAX_PREFIX}")
        # raw loop: s_n >= 0, so ratio bounds are s_lo / psi_hi and s_hi / psi_lo
        prec = prec_bits()
        xs = self.xstar
        s0 = _as_interval(self.s(m)) if m else Interval.exact(0)
        s_lo, s_hi = s0.lo_raw, s0.hi_raw
        lnb = None if self.psi.base == "e" else self.psi.log_base()
        add, div, log = libmp.mpf_add, libmp.mpf_div, libmp.mpf_log
        t_lo = t_hi = libmp.fzero
        for n in range(m + 1, m + W + 1):
            v = xs.term(n)
            if v:
                s_lo = add(s_lo, _raw_from_rational(v, prec, "f"), prec, "f")
                s_hi = add(s_hi, _raw_from_rational(v, prec, "c"), prec, "c")
            q = self.psi.exact(n) if lnb is not None else None
            if q is not None:
                p_lo = _raw_from_rational(q, prec, "f")
                p_hi = _raw_from_rational(q, prec, "c")
            else:
                arg = libmp.from_int(n + 1)
                p_lo = _widen(log(arg, prec, "f"), prec, False)
                p_hi = _widen(log(arg, prec, "c"), prec, True)
                if lnb is not None:
                    p_lo, p_hi = div(p_lo, lnb.hi_raw, prec, "f"), div(p_hi, lnb.lo_raw, prec, "c")
            t_lo = add(t_lo, div(s_lo, p_hi, prec, "f"), prec, "f")
            t_hi = add(t_hi, div(s_hi, p_lo, prec, "c"), prec, "c")
        return Interval(t_lo, t_hi)

    def certified_limit(self) -> Value | None:
        if not isinstance(self.psi, LogBase):
            return None
        xs = self.xstar
        if isinstance(xs, Finite) or (isinstance(xs, Blocks) and xs.tail == 0):
            return ZERO
        if isinstance(xs, Catalog):
            # s_n = (c/a) ln n + O(1) and Psi(n) = ln(n+1) / ln B
            return self.psi.log_base() * Interval.exact(abs(xs.coef) / xs.a)
        return None

    def sup_abs(self) -> Fraction | None:
        r = marcinkiewicz_norm(self.psi, self.x)
        return None if r.divergent else r.value.hi_fraction()


def _add_value(a: Value, b: Fraction) -> Value:
    if isinstance(a, Fraction):
        s = a + b
        if s.denominator < 1 << 128:
            return s
        return Interval.exact(s)
    return a + Interval.exact(b)


_REARR_CACHE: dict = {}


def _rearranged(x: Sequence) -> Sequence:
    key = x
    try:
        return _REARR_CACHE[key]
    except KeyError:
        pass
    xs = decreasing_rearrangement(x)
    if len(_REARR_CACHE) > 256:
        _REARR_CACHE.clear()
    _REARR_CACHE[key] = xs
    return xs


@dataclass(frozen=True)
class FunctionTrajectory(Trajectory):
    f: Callable[[int], Value]
    name: str = "callable"

    @property
    def label(self) -> str:
        return self.name

    def term(self, n: int) -> Value:
        v = self.f(n)
        return v if isinstance(v, (Fraction, Interval)) else Fraction(v)


def as_trajectory(x) -> Trajectory:
    if isinstance(x, Trajectory):
        return x
    if isinstance(x, Sequence):
        return SeqTrajectory(x)
    if callable(x):
        return FunctionTrajectory(x)
    raise TypeError(f"cannot average a {type(x).__name__}")


# ---------------------------------------------------------------------------
# estimators


@dataclass(frozen=True)
class EstimatorSpec:
    """``method`` is ``cesaro`` (window, offset), ``iterated`` (depth, window) or
    ``dilation`` (stages, on top of the Cesaro parameters)."""

    method: str = "cesaro"
    window: int = 1000
    offset: int = 0
    depth: int = 1
    stages: int = 0
    pieces: int = 2
    use_certificate: bool = True

    def __post_init__(self):
        if self.method not in ("cesaro", "iterated", "dilation"):
            raise ValueError(f"unknown estimator method {self.method!r}")
        if self.window < 1 or self.depth < 1 or self.stages < 0 or self.offset < 0 or self.pieces < 1:
            raise ValueError("estimator needs window >= 1, depth >= 1, stages >= 0, offset >= 0, pieces >= 1")

    def base(self) -> "EstimatorSpec":
        return EstimatorSpec("cesaro", self.window, self.offset, 1, 0, self.pieces, self.use_certificate)

    def describe(self) -> dict:
        d = {"method": self.method, "window": self.window, "offset": self.offset}
        if self.method == "iterated":
            d["depth"] = self.depth
        if self.method == "dilation":
            d["stages"] = self.stages
        d["use_certificate"] = self.use_certificate
        return d


@dataclass(frozen=True)
class LimitEstimate:
    """``value`` is exact when ``exact``; ``enclosure`` encloses the computed value
    and ``interval`` is the reported estimate range (it contains ``enclosure``)."""

    value: Fraction
    interval: Interval
    enclosure: Interval
    exact: bool
    certified: bool
    method: dict
    metadata: dict = field(default_factory=dict)

    @property
    def scalar(self) -> Value:
        return self.value if self.exact else self.enclosure

    def width(self) -> Fraction:
        return self.interval.width()


def _from_value(v: Value, interval: Interval | None, certified: bool, method: dict, meta: dict) -> LimitEstimate:
    if isinstance(v, Fraction):
        enc = Interval.exact(v)
        iv = enc if interval is None else interval.hull(enc)
        return LimitEstimate(v, iv, enc, True, certified, method, meta)
    iv = v if interval is None else interval.hull(v)
    return LimitEstimate(v.mid(), iv, v, False, certified, method, meta)


def _cesaro(t: Trajectory, m: int, W: int, pieces: int) -> tuple[Value, Interval]:
    size = W // pieces
    if pieces == 1 or size < 1:
        avg = _divide(t.window_sum(m, W), W)
        return avg, _as_interval(avg)
    acc = _Acc()
    parts = []
    for i in range(pieces):
        part = t.window_sum(m + i * size, size)
        acc.add(part)
        parts.append(_as_interval(_divide(part, size)))
    acc.add(t.window_sum(m + pieces * size, W - pieces * size))
    avg = _divide(acc.result(), W)
    iv = _as_interval(avg)
    for p in parts:
        iv = iv.hull(p)
    return avg, iv


def _iterated(t: Trajectory, d: int, W: int) -> tuple[Value, Interval]:
    if W > MAX_PREFIX:
        raise ConfigurationError(f"window {W} exceeds the evaluable prefix {MAX_PREFIX}")
    vals = [_as_interval(v) for v in t.terms(1, W)]
    for _ in range(d):
        out, acc = [], Interval.exact(0)
        for n, v in enumerate(vals, start=1):
            acc = acc + v
            out.append(acc / Interval.exact(n))
        vals = out
    last = vals[-1]
    iv = last
    for v in vals[W // 2:]:
        iv = iv.hull(v)
    return last, iv


def estimate_limit(est: EstimatorSpec, x) -> LimitEstimate:
    """Banach-limit estimate of ``x`` (a Sequence or any :class:`Trajectory`)."""
    if est.method == "dilation":
        if not isinstance(x, Sequence):
            raise TypeError("dilation averaging acts on sequences")
        return dilation_averaged_estimate(est.stages, x, est.base())
    t = as_trajectory(x)
    desc = est.describe()
    desc["source"] = t.label
    if est.use_certificate:
        cert = t.certified_limit()
        if cert is not None:
            return _from_value(cert, None, True, desc, {"certificate": _certificate_text(t)})
    if est.method == "cesaro":
        v, iv = _cesaro(t, est.offset, est.window, est.pieces)
        meta = {"window": [est.offset + 1, est.offset + est.window], "pieces": est.pieces}
    else:
        v, iv = _iterated(t, est.depth, est.window)
        meta = {"window": [1, est.window], "depth": est.depth}
    return _from_value(v, iv, False, desc, meta)


def _certificate_text(t: Trajectory) -> str:
    if isinstance(t, Ratio):
        if isinstance(t.xstar, Catalog):
            return "s_n / Psi(n) converges to ln(B) |c| / a"
        return "s_n is eventually constant and Psi(n) -> infinity"
    if isinstance(t, Product):
        return "product of a convergent multiplier and a sequence with forced limit"
    inner = t
    while isinstance(inner, Shifted):
        inner = inner.base
    x = getattr(inner, "x", None)
    if isinstance(x, Periodic):
        return "periodic: shift invariance and linearity force the pattern mean"
    return "convergent: every Banach limit extends lim"


@dataclass(frozen=True)
class DilationEstimate:
    estimate: LimitEstimate
    stage_values: list
    residual: Fraction
    residual_bound: Fraction

    @property
    def residual_ok(self) -> bool:
        return self.residual <= self.residual_bound


def dilation_averaged_estimate(stages: int, x: Sequence, base: EstimatorSpec | None = None) -> DilationEstimate:
    """``phi_n(x) = (1/(n+1)) sum_{k=0}^{n} phi(D_2^k x)``, with its dilation residual.

    ``phi_n(D_2 x) - phi_n(x) = (phi(D_2^{n+1} x) - phi(x)) / (n+1)``, which is
    what the residual measures.
    """
    if stages < 0:
        raise ValueError("stages must be non-negative")
    base = base or EstimatorSpec()
    vals = [estimate_limit(base, Dilated(x, k)) for k in range(stages + 2)]
    acc = _Acc()
    for e in vals[:-1]:
        acc.add(e.scalar)
    value = _divide(acc.result(), stages + 1)
    spread = vals[0].interval
    for e in vals[1:-1]:
        spread = spread.hull(e.interval)
    diff = _divide(_sub(vals[-1].scalar, vals[0].scalar), stages + 1)
    method = {"method": "dilation", "stages": stages, "base": base.describe(), "source": x.kind}
    est = _from_value(value, spread, all(e.certified for e in vals), method,
                      {"stage_values": len(vals) - 1})
    bound = Fraction(2) * x.sup_abs() / (stages + 1)
    return DilationEstimate(est, [e.scalar for e in vals[:-1]], abs_upper(diff), bound)


def _nonneg(x: Sequence) -> bool:
    if isinstance(x, Finite):
        return all(v >= 0 for v in x.values)
    if isinstance(x, Blocks):
        return x.tail >= 0 and all(v >= 0 for v, _ in x.blocks)
    if isinstance(x, Periodic):
        return all(v >= 0 for v in x.pattern + x.prefix_values)
    if isinstance(x, Catalog):
        return x.coef > 0 and all(v >= 0 for _, v in x.patch)
    return False


def _ordinary_limit(x: Sequence) -> Fraction | None:
    if isinstance(x, (Finite, Catalog)):
        return ZERO
    if isinstance(x, Blocks):
        return x.tail
    if isinstance(x, Periodic) and len(x.pattern) == 1:
        return x.pattern[0]
    return None


def axiom_residuals(est: EstimatorSpec, x: Sequence, mult: Multiplier | None = None) -> dict:
    """Measured departures from the Banach-limit axioms for one input."""
    mult = mult or Multiplier()
    e = estimate_limit(est, x)
    shifted = estimate_limit(est, Shifted(SeqTrajectory(x), 1)) if est.method != "dilation" else None
    prod = estimate_limit(est, Product(mult, SeqTrajectory(x))) if est.method != "dilation" else None
    sup = x.sup_abs()
    report = {
        "estimate": e,
        "shift_residual": abs_upper(_sub(shifted.scalar, e.scalar)) if shifted else None,
        "nonnegative_input": _nonneg(x),
        "positivity_holds": (not _nonneg(x)) or e.interval.lo_fraction() >= 0,
        "norm_bound_holds": e.interval.lo_fraction() >= -sup and e.interval.hi_fraction() <= sup,
        "sup_abs": sup,
        "convergent_limit": None,
        "agreement_residual": None,
        "product_residual": None,
        "multiplier_limit": mult.limit,
    }
    lim = _ordinary_limit(x)
    if lim is not None:
        report["convergent_limit"] = lim
        report["agreement_residual"] = max(abs(e.interval.lo_fraction() - lim), abs(e.interval.hi_fraction() - lim))
    if prod is not None:
        report["product_residual"] = abs_upper(_sub(prod.scalar, _mul(mult.limit, e.scalar)))
    return report


# ---------------------------------------------------------------------------
# ratio sequences and gamma


def ratio_sequence(psi: PsiSpec, x: Sequence, N: int) -> list[Value]:
    """``(s_n(x) / Psi(n))_{n <= N}``; exact where Psi(n) is rational."""
    if N < 1:
        raise ValueError("N must be positive")
    return list(Ratio(psi, x).terms(1, N))


CSV_MAX_ROWS = 10**6


def ratio_csv(psi: PsiSpec, x: Sequence, N: int, digits: int = 20) -> str:
    """CSV rows ``n, s_n, Psi(n), ratio`` (decimal midpoints), capped at 10^6 rows."""
    def fmt(v: Value) -> str:
        if isinstance(v, Fraction):
            return format_fraction(v) if v.denominator < 10**digits else _dec(v, digits)
        return _dec(v.mid(), digits)

    rows = min(N, CSV_MAX_ROWS)
    t = Ratio(psi, x)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "s_n", "psi_n", "ratio"])
    xs = t.xstar
    s: Value = ZERO
    for n, r in zip(range(1, rows + 1), t.terms(1, rows)):
        s = _add_value(s, xs.term(n))
        q = psi.exact(n)
        w.writerow([n, fmt(s), fmt(q if q is not None else psi(n)), fmt(r)])
    if N > rows:
        w.writerow(["# truncated", N - rows, "rows omitted", ""])
    return buf.getvalue()


def _dec(q: Fraction, digits: int) -> str:
    return format_directed(q, digits, up=False)


def _phi(psi: PsiSpec, est: EstimatorSpec, x: Sequence) -> LimitEstimate:
    r = marcinkiewicz_norm(psi, x)
    if r.divergent:
        raise NonMemberError(f"input is not in m_Psi: {r.certificate}")
    return estimate_limit(est, Ratio(psi, x))


def symmetric_functional(psi: PsiSpec, est: EstimatorSpec, x: Sequence) -> LimitEstimate:
    """``gamma(x) = phi(x+) - phi(x-)`` with ``phi(y) = L((s_n(y) / Psi(n))_n)``."""
    p = _phi(psi, est, pos_part(x))
    n = _phi(psi, est, neg_part(x))
    value = _sub(p.scalar, n.scalar)
    iv = p.interval - n.interval
    method = dict(est.describe(), functional="gamma", psi=psi.label)
    meta = {"phi_plus": p, "phi_minus": n}
    if isinstance(value, Fraction) and p.exact and n.exact:
        enc = Interval.exact(value)
        return LimitEstimate(value, iv.hull(enc), enc, True, p.certified and n.certified, method, meta)
    enc = _as_interval(value)
    return LimitEstimate(enc.mid(), iv.hull(enc), enc, False, p.certified and n.certified, method, meta)


# ---------------------------------------------------------------------------
# sandwich inequalities


def sandwich_check(psi: PsiSpec, x: Sequence, y: Sequence, N: int) -> dict:
    """``s_n(x+y) <= s_n(x) + s_n(y) <= s_{2n}(x+y)`` for all ``n <= N``, exactly."""
    from .algebra import add

    if not (_nonneg(x) and _nonneg(y)):
        raise ValueError("sandwich_check needs non-negative inputs")
    z = add(x, y)
    xs, ys, zs = (decreasing_rearrangement(v) for v in (x, y, z))
    # everything is scaled to one common denominator D so the scan runs on ints
    sx, sy, sz = _sums(xs, N), _sums(ys, N), _sums(zs, 2 * N)
    D = math.lcm(*(q.denominator for q in sx + sy + sz))
    ix, iy, iz = ([q.numerator * (D // q.denominator) for q in v] for v in (sx, sy, sz))
    left = [ix[n] + iy[n] - iz[n] for n in range(N)]
    right = [iz[2 * n + 1] - ix[n] - iy[n] for n in range(N)]
    violations = [n + 1 for n in range(N) if left[n] < 0 or right[n] < 0]
    left_slack, right_slack = Fraction(min(left), D), Fraction(min(right), D)
    doubling = psi(2 * N) / psi(N) if psi.evaluable(2 * N) else None
    return {
        "N": N,
        "violations": violations,
        "min_left_slack": left_slack,
        "min_right_slack": right_slack,
        "max_left_slack": Fraction(max(left), D),
        "doubling_factor_at_N": doubling,
        "holds": not violations,
    }


def _sums(xs: Sequence, N: int) -> list[Fraction]:
    if isinstance(xs, Blocks) and xs.blocks and xs.total > 4 * N:
        return [rearranged_sum(xs, n) for n in range(1, N + 1)]
    vals = xs.prefix(N)
    D = math.lcm(*(v.denominator for v in vals))
    return [Fraction(t, D) for t in accumulate(v.numerator * (D // v.denominator) for v in vals)]
