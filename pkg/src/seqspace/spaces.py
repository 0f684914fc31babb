"""Norms and membership for the concrete sequence spaces.

Every norm comes back as a :class:`NormResult` holding a certified enclosure.
Exactly representable results also carry ``exact_value`` so that callers can
compare rationals without any interval reasoning.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import garling as _g
from .algebra import EXPAND_LIMIT, absolute, multiply
from .errors import PsiTableTooShort, UnsupportedCombination
from .rearrange import decreasing_rearrangement
from .scalar import Interval, as_fraction, get_digits, interval_max, interval_sum
from .sequences import ZERO, Blocks, Catalog, Finite, Periodic, Sequence

# ---------------------------------------------------------------------------
# Psi


@dataclass(frozen=True)
class LogBase:
    """``Psi(n) = log_base(n + 1)``; ``base`` is a rational > 1 or the string ``"e"``."""

    base: Union[Fraction, str] = Fraction(2)

    def __post_init__(self):
        if self.base == "e":
            return
        b = as_fraction(self.base)
        if b <= 1:
            raise ValueError("log base must exceed 1")
        object.__setattr__(self, "base", b)

    @property
    def label(self) -> str:
        return "log" + ("e" if self.base == "e" else str(self.base))

    def log_base(self) -> Interval:
        return Interval.exact(1) if self.base == "e" else Interval.exact(self.base).log()

    def exact(self, n: int) -> Fraction | None:
        """Rational value of Psi(n) when ``n + 1`` is an integer power of an integer base."""
        if self.base == "e" or self.base.denominator != 1:
            return None
        b, m, k = self.base.numerator, n + 1, 0
        while m % b == 0:
            m //= b
            k += 1
        return Fraction(k) if m == 1 else None

    def __call__(self, n: int) -> Interval:
        return _log_psi(self, n, get_digits())

    def evaluable(self, n: int) -> bool:
        return True


@functools.lru_cache(maxsize=1 << 16)
def _log_psi(psi: LogBase, n: int, digits: int) -> Interval:
    q = psi.exact(n)
    if q is not None:
        return Interval.exact(q)
    val = Interval.exact(n + 1).log()
    return val if psi.base == "e" else val / psi.log_base()


@dataclass(frozen=True)
class Table:
    """``Psi(n) = values[n-1]`` for ``n <= len(values)``."""

    values: tuple

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if not vals:
            raise ValueError("empty Psi table")
        if any(v <= 0 for v in vals):
            raise ValueError("Psi table entries must be positive")
        object.__setattr__(self, "values", vals)

    @property
    def label(self) -> str:
        return f"table{len(self.values)}"

    def exact(self, n: int) -> Fraction:
        if n > len(self.values):
            raise PsiTableTooShort(f"Psi table has {len(self.values)} entries, needed {n}")
        return self.values[n - 1]

    def __call__(self, n: int) -> Interval:
        return Interval.exact(self.exact(n))

    def evaluable(self, n: int) -> bool:
        return n <= len(self.values)


PsiSpec = Union[LogBase, Table]


def psi_axiom_report(psi: PsiSpec, N: int) -> dict:
    """Check the Psi axioms on ``[1, N]``: Psi(1), monotonicity, Psi(n)/n and doubling."""
    if N < 4:
        raise ValueError("psi_axiom_report needs N >= 4")
    if isinstance(psi, Table) and len(psi.values) < N:
        raise PsiTableTooShort(f"Psi table has {len(psi.values)} entries, report needs {N}")
    psi1 = psi(1)
    if isinstance(psi, Table):
        vals = list(psi.values[:N])
        violation = max([ZERO] + [vals[i] - vals[i + 1] for i in range(N - 1)])
        monotone = violation == 0
        # a finite table cannot prove divergence; a flat second half is evidence against it
        unbounded = vals[-1] > vals[N // 2 - 1]
    else:
        violation = ZERO  # log is strictly increasing
        monotone = True
        unbounded = True
    dyadic = []
    n = 1
    while n <= N:
        dyadic.append(n)
        n *= 2
    over_n = [(n, psi(n) / n) for n in dyadic]
    doubling = [(n, psi(2 * n) / psi(n)) for n in dyadic if 2 * n <= N]
    trend = all(doubling[i + 1][1].hi_fraction() <= doubling[i][1].hi_fraction()
                for i in range(len(doubling) - 1))
    return {
        "psi": psi.label,
        "N": N,
        "psi_1": psi1,
        "psi_1_is_one": psi1.is_point and psi1.lo_fraction() == 1,
        "monotone": monotone,
        "max_monotonicity_violation": violation,
        "tends_to_infinity": unbounded,
        "psi_over_n": over_n,
        "doubling_ratio": doubling,
        "doubling_decreasing": trend,
    }


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class Lp:
    p: Fraction = Fraction(1)

    def __post_init__(self):
        p = as_fraction(self.p)
        if p < 1:
            raise ValueError("p must be at least 1")
        object.__setattr__(self, "p", p)

    claims_symmetric = True

    @property
    def label(self) -> str:
        return f"lp:{self.p}"


@dataclass(frozen=True)
class Linf:
    claims_symmetric = True
    label = "linf"


@dataclass(frozen=True)
class WeightedL1:
    weights: Sequence

    claims_symmetric = False
    label = "wl1"


@dataclass(frozen=True)
class Marcinkiewicz:
    psi: PsiSpec = field(default_factory=LogBase)

    claims_symmetric = True

    @property
    def label(self) -> str:
        return f"marcinkiewicz:{self.psi.label}"


@dataclass(frozen=True)
class Garling:
    claims_symmetric = False
    label = "garling"


SpaceSpec = Union[Lp, Linf, WeightedL1, Marcinkiewicz, Garling]


@dataclass(frozen=True)
class NormResult:
    space: str
    value: Interval
    exact: bool = False
    divergent: bool = False
    certificate: str = ""
    exact_value: Fraction | None = None

    def __post_init__(self):
        if self.exact and self.exact_value is None:
            raise ValueError("exact results need exact_value")
        if self.divergent and self.value.lo_raw != Interval.infinite().lo_raw:
            raise ValueError("divergent results must be [+inf, +inf]")

    @property
    def finite(self) -> bool:
        return not self.divergent and self.value.is_finite

    def same_as(self, other: "NormResult") -> bool:
        """Identical exact values, or identical certified intervals."""
        if self.divergent or other.divergent:
            return self.divergent and other.divergent
        if self.exact and other.exact:
            return self.exact_value == other.exact_value
        return self.value == other.value

    def certainly_differs(self, other: "NormResult") -> bool:
        if self.divergent != other.divergent:
            return True
        if self.divergent:
            return False
        if self.exact and other.exact:
            return self.exact_value != other.exact_value
        return not self.value.intersects(other.value)


def _exact(space: str, q: Fraction, cert: str) -> NormResult:
    return NormResult(space, Interval.exact(q), True, False, cert, q)


def _enclosed(space: str, iv: Interval, cert: str) -> NormResult:
    if iv.is_point:
        q = iv.lo_fraction()
        return NormResult(space, iv, True, False, cert, q)
    return NormResult(space, iv, False, False, cert, None)


def _divergent(space: str, cert: str) -> NormResult:
    return NormResult(space, Interval.infinite(), False, True, cert, None)


def _rational_root(q: Fraction, k: int) -> Fraction | None:
    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / k)) if n < 2**1000 else None
        if r is None:
            lo, hi = 0, 1 << (n.bit_length() // k + 1)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid**k <= n:
                    lo = mid
                else:
                    hi = mid - 1
            r = lo
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**k == n:
                return c
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _lp_from_power_sum(label: str, p: Fraction, total, cert: str) -> NormResult:
    if isinstance(total, Fraction):
        if p == 1:
            return _exact(label, total, cert)
        if p.denominator == 1:
            root = _rational_root(total, p.numerator)
            if root is not None:
                return _exact(label, root, cert)
        total = Interval.exact(total)
    return _enclosed(label, total.pow_fraction(1 / p), cert)


def _power_sum(values_with_counts, p: Fraction):
    """Exact for integer p, otherwise an interval summed in canonical order."""
    items = sorted(((abs(v), c) for v, c in values_with_counts if v != 0), reverse=True)
    if p.denominator == 1:
        return sum((v ** p.numerator * c for v, c in items), ZERO)
    return interval_sum(Interval.exact(v).pow_fraction(p) * c for v, c in items)


def _catalog_lp(label: str, x: Catalog, p: Fraction) -> NormResult:
    if p == 1:
        return _divergent(label, "harmonic-type tail: sum of c/(a n + b) diverges")
    c, a, b = abs(x.coef), x.a, x.b
    M = max(x.patch_max, 1024)
    head = interval_sum(Interval.exact(abs(x.term(n))).pow_fraction(p) for n in range(1, M + 1))
    # sum_{n>M} f(n) lies between the integrals of f over [M+1, inf) and [M, inf)
    cp = Interval.exact(c).pow_fraction(p)

    def tail_integral(start: int) -> Interval:
        return cp / Interval.exact(a * start + b).pow_fraction(p - 1) / (a * (p - 1))

    lo = tail_integral(M + 1)
    hi = tail_integral(M)
    total = Interval((head + lo).lo_raw, (head + hi).hi_raw)
    return _enclosed(label, total.pow_fraction(1 / p),
                     f"head n<={M} summed, tail enclosed by integrals of (c/(a t + b))^p")


def elementary_norm(space: SpaceSpec, x: Sequence) -> NormResult:
    """``l_p``, ``l_inf`` and weighted ``l_1`` norms."""
    if isinstance(space, Linf):
        return _exact(space.label, x.sup_abs(), "supremum of finitely many described values")
    if isinstance(space, Lp):
        return _lp_norm(space, x)
    if isinstance(space, WeightedL1):
        w = space.weights
        if not _everywhere_positive(w):
            raise ValueError("weighted l1 weights must be positive")
        prod = multiply(absolute(x), w)
        inner = _lp_norm(Lp(Fraction(1)), prod)
        return NormResult(space.label, inner.value, inner.exact, inner.divergent,
                          "sum |x_n| w_n; " + inner.certificate, inner.exact_value)
    raise TypeError(f"elementary_norm does not handle {type(space).__name__}")


def _everywhere_positive(w: Sequence) -> bool:
    if isinstance(w, Blocks):
        return w.tail > 0 and all(v > 0 for v, _ in w.blocks)
    if isinstance(w, Periodic):
        return all(v > 0 for v in w.prefix_values + w.pattern)
    if isinstance(w, Catalog):
        return w.coef > 0 and all(v > 0 for _, v in w.patch)
    return False  # finite support: zero from some index on


def _lp_norm(space: Lp, x: Sequence) -> NormResult:
    label, p = space.label, space.p
    if isinstance(x, Finite):
        return _lp_from_power_sum(label, p, _power_sum([(v, 1) for v in x.values], p), "finite sum")
    if isinstance(x, Blocks):
        if x.tail != 0:
            return _divergent(label, "infinitely many entries equal to a non-zero constant")
        return _lp_from_power_sum(label, p, _power_sum(x.blocks, p), "finite block sum")
    if isinstance(x, Periodic):
        if any(v != 0 for v in x.pattern):
            return _divergent(label, "a non-zero value repeats periodically")
        return _lp_from_power_sum(label, p, _power_sum([(v, 1) for v in x.prefix_values], p), "finite sum")
    if isinstance(x, Catalog):
        return _catalog_lp(label, x, p)
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


# ---------------------------------------------------------------------------
# Marcinkiewicz


def marcinkiewicz_norm(psi: PsiSpec, x: Sequence) -> NormResult:
    """``sup_n s_n(x) / Psi(n)``."""
    label = Marcinkiewicz(psi).label
    xs = decreasing_rearrangement(x)
    if isinstance(xs, Finite):
        return _ratio_sup(label, psi, _running_sums(xs.values), "finite support: ratio is non-increasing past the support")
    if isinstance(xs, Blocks):
        if xs.tail != 0:
            if isinstance(psi, Table):
                raise PsiTableTooShort("cannot certify divergence with a finite Psi table")
            return _divergent(label, "s_n >= t n with t > 0 while Psi(n)/n -> 0")
        if isinstance(psi, Table):
            if xs.total > len(psi.values):
                raise PsiTableTooShort(f"Psi table has {len(psi.values)} entries, support needs {xs.total}")
            return _ratio_sup(label, psi, _running_sums(xs.prefix(xs.total)), "full scan over the support")
        cands = _block_candidates(xs)
        return _ratio_sup(label, psi, cands, "ratio is quasi-convex on each constant block; endpoints scanned")
    if isinstance(xs, Catalog):
        if isinstance(psi, Table):
            raise PsiTableTooShort("harmonic-type inputs need an analytic Psi")
        return _catalog_marcinkiewicz(label, psi, xs)
    raise TypeError(f"unknown sequence kind {type(xs).__name__}")


def _running_sums(values) -> list[tuple[int, Fraction]]:
    out, total = [], ZERO
    for n, v in enumerate(values, start=1):
        total += v
        out.append((n, total))
    return out


def _block_candidates(xs: Blocks) -> list[tuple[int, Fraction]]:
    out = [(1, xs.blocks[0][0])] if xs.blocks else []
    n, total = 0, ZERO
    for v, c in xs.blocks:
        n += c
        total += v * c
        out.append((n, total))
    return out


def _ratio_sup(label: str, psi: PsiSpec, cands: list[tuple[int, Fraction]], cert: str) -> NormResult:
    if not cands:
        return _exact(label, ZERO, "zero sequence")
    exact_vals = [psi.exact(n) for n, _ in cands]
    if all(q is not None for q in exact_vals):
        best = max(s / q for (_, s), q in zip(cands, exact_vals))
        return _exact(label, best, cert)
    ratios = [Interval.exact(s) / psi(n) for n, s in cands]
    return _enclosed(label, interval_max(ratios), cert)


def _catalog_marcinkiewicz(label: str, psi: LogBase, xs: Catalog) -> NormResult:
    c, a, b = xs.coef, xs.a, xs.b
    lnB = psi.log_base()
    K = max(a, b)
    N = max(64, xs.patch_max)
    s = Interval.exact(0)
    n = 0
    best = None
    while True:
        while n < N:
            n += 1
            s = s + Interval.exact(xs.term(n))
            r = s / psi(n)
            best = r if best is None else interval_max([best, r])
        # s_m <= s_N + (c/a)(ln K + ln(m+1) - ln(aN + b)) for m > N
        A = s + Interval.exact(c / a) * (Interval.exact(K).log() - Interval.exact(a * N + b).log())
        limit = lnB * Interval.exact(c / a)
        if A.hi_fraction() <= 0:
            tail = limit
        else:
            tail = lnB * (A / Interval.exact(N + 2).log()) + limit
        if tail.certainly_le(best) or N >= 1 << 16:
            break
        N *= 2
    hi = best.hi_raw if tail.certainly_le(best) else best.hull(tail).hi_raw
    lo = interval_max([best, limit]).lo_raw
    return _enclosed(label, Interval(lo, hi), f"scan to n={N} plus analytic tail bound")


# ---------------------------------------------------------------------------
# Garling

GARLING_EXPAND = 4096
GARLING_HEAD = 512


def garling_norm(x: Sequence) -> NormResult:
    label = Garling.label
    if isinstance(x, Finite):
        return _enclosed(label, _g.garling_interval(x.values), "fixed-point DP, both roundings")
    if isinstance(x, Periodic):
        if any(v != 0 for v in x.pattern):
            return _divergent(label, "identity phi on a periodic non-zero value gives sum c/sqrt(n)")
        return garling_norm(Finite.from_list(x.prefix_values))
    if isinstance(x, Blocks):
        if x.tail != 0:
            return _divergent(label, "constant non-zero tail gives sum c/sqrt(n)")
        if x.total <= GARLING_EXPAND:
            return garling_norm(Finite.from_list(x.prefix(x.total)))
        head = x.prefix(GARLING_HEAD)
        rest = _drop(x, GARLING_HEAD)
        rs = decreasing_rearrangement(rest)
        tail_bound = _block_weight_sum(rs.blocks, upper=True)
        r = _head_plus_tail(label, head, tail_bound, "head DP + rearranged tail bound")
        # identity phi from below, rearrangement inequality on the whole sequence from above
        ident = _block_weight_sum(absolute(x).blocks, upper=False)
        whole = _block_weight_sum(decreasing_rearrangement(x).blocks, upper=True)
        lo = interval_max([r.value, ident]).lo_raw
        hi = r.value.hi_raw if r.value.hi_fraction() <= whole.hi_fraction() else whole.hi_raw
        return NormResult(label, Interval(lo, hi), False, False,
                          r.certificate + "; identity phi and rearranged bounds", None)
    if isinstance(x, Catalog):
        K = max(GARLING_HEAD, x.patch_max)
        head = x.prefix(K)
        c, a, b = abs(x.coef), x.a, x.b
        alpha = a * K + b
        # sum_{j>=1} c / ((alpha + a j) sqrt j) <= f(1) + pi / sqrt(a alpha)
        f1 = Interval.exact(c) / Interval.exact(alpha + a)
        bound = f1 + Interval.exact(c) * Interval.pi() / Interval.exact(a * alpha).sqrt()
        return _head_plus_tail(label, head, bound, "head DP + integral tail bound")
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def _block_weight_sum(blocks, upper: bool) -> Interval:
    total, pos = Interval.exact(0), 0
    part = _g.inv_sqrt_sum_upper if upper else _g.inv_sqrt_sum_lower
    for v, c in blocks:
        total = total + Interval.exact(abs(v)) * part(pos, pos + c)
        pos += c
    return total


def _drop(x: Blocks, k: int) -> Blocks:
    from .rearrange import _drop_blocks

    return _drop_blocks(x, k)


def _head_plus_tail(label: str, head, tail_bound: Interval, cert: str) -> NormResult:
    h = _g.garling_interval(head)
    return NormResult(label, Interval(h.lo_raw, (h + tail_bound).hi_raw), False, False, cert, None)


# ---------------------------------------------------------------------------
# dispatch


def norm(space: SpaceSpec, x: Sequence) -> NormResult:
    if isinstance(space, (Lp, Linf, WeightedL1)):
        return elementary_norm(space, x)
    if isinstance(space, Marcinkiewicz):
        return marcinkiewicz_norm(space.psi, x)
    if isinstance(space, Garling):
        return garling_norm(x)
    raise TypeError(f"unknown space {space!r}")


@dataclass(frozen=True)
class Membership:
    status: str  # "member" | "non-member" | "unknown"
    result: NormResult | None
    note: str = ""


def membership(space: SpaceSpec, x: Sequence) -> Membership:
    try:
        r = norm(space, x)
    except (UnsupportedCombination, PsiTableTooShort) as exc:
        return Membership("unknown", None, str(exc))
    if r.divergent:
        return Membership("non-member", r, r.certificate)
    if r.value.is_finite:
        return Membership("member", r, r.certificate)
    return Membership("unknown", r, "no finite upper bound")
