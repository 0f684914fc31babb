"""Counterexamples, built and checked with certified arithmetic."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import garling as _g
from .errors import ConstructionError
from .rearrange import FinitePermutation, apply_map, decreasing_rearrangement
from .scalar import Interval, get_digits, precision
from .sequences import Blocks, Finite, Periodic, constant, unit_vector
from .spaces import LogBase, PsiSpec, WeightedL1, elementary_norm, marcinkiewicz_norm, membership

# ---------------------------------------------------------------------------
# weighted l1


def weighted_l1_weights() -> Blocks:
    """``w = (1/2, 1, 1, ...)``."""
    return Blocks(((Fraction(1, 2), 1),), Fraction(1))


def weighted_l1_witness(n_max: int = 10, trials: int = 100, seed: int = 0) -> dict:
    """Norms of unit vectors in ``l_1(w)`` and the membership check under the swap 1 <-> 2."""
    space = WeightedL1(weighted_l1_weights())
    norms = {n: elementary_norm(space, unit_vector(n)).exact_value for n in range(1, n_max + 1)}
    swap = FinitePermutation({1: 2, 2: 1})
    rng = random.Random(seed)
    same = 0
    for _ in range(trials):
        k = rng.randint(1, 8)
        x = Finite.from_list(Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(k))
        if membership(space, x).status == membership(space, apply_map(x, swap)).status:
            same += 1
    return {
        "norms": norms,
        "e1": norms[1],
        "others_equal_one": all(norms[n] == 1 for n in range(2, n_max + 1)),
        "norm_not_symmetric": norms[1] != norms[2],
        "membership_swap_invariant": same == trials,
        "trials": trials,
        "seed": seed,
    }


# ---------------------------------------------------------------------------
# renorming remark


def renorm_contradiction() -> dict:
    """Follow ``||x|| = ||x||_inf + |gamma(x)|`` for a hypothetical symmetric linear gamma.

    ``(1,1,1,...) = (1,0,1,0,...) + (0,1,0,1,...)`` and symmetry gives equal values
    on both halves, so gamma(1,0,1,0,...) = 1/2.  The two sequences have the same
    decreasing rearrangement but different norms, which a symmetric norm forbids.
    """
    ones = constant(1)
    alt = Periodic((1, 0))
    gamma_ones = Fraction(1)
    gamma_alt = gamma_ones / 2
    norm_ones = ones.sup_abs() + abs(gamma_ones)
    norm_alt = Fraction(1) + abs(gamma_alt)
    return {
        "gamma_ones": gamma_ones,
        "gamma_alternating": gamma_alt,
        "norm_ones": norm_ones,
        "norm_alternating": norm_alt,
        "same_rearrangement": decreasing_rearrangement(alt) == decreasing_rearrangement(ones),
        "inconsistent": norm_ones != norm_alt,
    }


# ---------------------------------------------------------------------------
# Garling


@dataclass(frozen=True)
class GarlingWitness:
    m: int
    norm_x: Interval
    norm_y: Interval
    harmonic_lower: Fraction
    y_upper: Interval

    @property
    def x_contains_harmonic(self) -> bool:
        return self.norm_x.contains(self.harmonic_lower)

    @property
    def x_error(self) -> Fraction:
        return max(abs(self.norm_x.lo_fraction() - self.harmonic_lower),
                   abs(self.norm_x.hi_fraction() - self.harmonic_lower))

    @property
    def y_bounded(self) -> bool:
        return self.norm_y.certainly_le(self.y_upper)

    @property
    def differ(self) -> bool:
        return not self.norm_x.intersects(self.norm_y)


def _inv_sqrt_fixed(m: int, bits: int) -> tuple[list[int], list[int]]:
    lo = [math.isqrt((1 << (2 * bits)) // n) for n in range(1, m + 1)]
    return lo, [v + 1 for v in lo]


def garling_witness(m: int) -> GarlingWitness:
    """``x^m = (1, 1/sqrt2, ..., 1/sqrt m)`` against its reversal ``y^m``.

    Entries are irrational, so they enter the DP as fixed-point brackets and
    both norms come out as certified intervals.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    bits = _g.fixed_bits()
    v_lo, v_hi = _inv_sqrt_fixed(m, bits)
    w_lo, w_hi = _g.weights_fixed(m, bits)
    scale = 1 << bits

    def norm(lo_vals, hi_vals) -> Interval:
        lo = _g._dp(lo_vals, w_lo, bits, up=False)
        hi = _g._dp(hi_vals, w_hi, bits, up=True)
        return Interval.hull_of(Fraction(lo, scale), Fraction(hi, scale))

    nx = norm(v_lo, v_hi)
    ny = norm(v_lo[::-1], v_hi[::-1])
    H = sum((Fraction(1, n) for n in range(1, m + 1)), Fraction(0))
    return GarlingWitness(m, nx, ny, H, Interval.pi() + 1)


def garling_growth(threshold: int, m_cap: int = 1 << 12) -> dict:
    """Smallest dyadic ``m`` with ``||x^m||_g > threshold``, with ``||y^m||_g`` along the way."""
    m, seen = 2, []
    while m <= m_cap:
        w = garling_witness(m)
        seen.append((m, w.norm_x, w.norm_y))
        if w.norm_x.lo_fraction() > threshold:
            return {"threshold": threshold, "m": m, "trace": seen, "reached": True}
        m *= 2
    return {"threshold": threshold, "m": None, "trace": seen, "reached": False}


# ---------------------------------------------------------------------------
# oscillating ratio


@dataclass(frozen=True)
class OscillationWitness:
    stages: tuple  # ((c_k, N_k), ...)
    checkpoints: tuple  # ((T_k, ratio interval), ...)
    sup_bound: Interval
    psi: PsiSpec
    precision: int
    delta_digits: int

    def sequence(self) -> Blocks:
        return Blocks(tuple((c, N) for c, N in self.stages), Fraction(0))


def _ln(n: int) -> Interval:
    return Interval.exact(n).log()


def _round_down(iv: Interval, sig: int) -> Fraction:
    """Rational just below ``iv.lo`` with ``sig`` significant decimal digits."""
    q = iv.lo_fraction()
    if q <= 0:
        raise ConstructionError("non-positive stage value")
    e = math.floor(math.log10(q.numerator) - math.log10(q.denominator))
    shift = sig - 1 - e
    scale = Fraction(10) ** shift
    return Fraction(math.floor(q * scale)) / scale


def oscillating_construct(stages: int, psi: PsiSpec | None = None, digits: int | None = None) -> OscillationWitness:
    """Stage lengths ``N_k`` and levels ``c_k`` whose ratio ``s_n / ln(n+1)`` alternates.

    Odd checkpoints sit at 1 (from below, within rounding); even checkpoints are
    pushed a relative ``10^-(P+5)`` below 1/2 so that ``<= 1/2`` is certifiable.
    """
    psi = psi or LogBase("e")
    if not (isinstance(psi, LogBase) and psi.base == "e"):
        raise ValueError("the construction needs Psi(n) = ln(n + 1)")
    if stages < 2:
        raise ValueError("need at least two stages")
    P = digits or get_digits()
    work = P + 20
    delta = Fraction(1, 10 ** (P + 5))
    with precision(work):
        N = 1
        c = _round_down(_ln(2) / N, work)
        out = [(c, N)]
        T, S = N, N * c
        for k in range(2, stages + 1):
            if k % 2 == 0:
                N = (T + 1) ** 4 - (T + 1)
                L = _ln(T + N + 1)
                cap = L * (Fraction(1, 4) - delta) / N
                c_new = min(c, _round_down(cap, work))
            else:
                N = _first_crossing(S, c, T)
                c_new = _round_down((_ln(T + N + 1) - S) / N, work)
            if not (0 < c_new <= c):
                raise ConstructionError(f"stage {k}: c_k = {c_new} breaks 0 < c_k <= c_(k-1)")
            c = c_new
            T += N
            S += N * c
            out.append((c, N))
        w = OscillationWitness(tuple(out), (), Interval.exact(0), psi, P, P + 5)
        checkpoints = _checkpoints(w)
        sup = marcinkiewicz_norm(psi, w.sequence()).value
    return OscillationWitness(tuple(out), checkpoints, sup, psi, P, P + 5)


def _first_crossing(S: Fraction, c: Fraction, T: int) -> int:
    """First ``n >= 1`` with ``(S + n c) / ln(T + n + 1) > 1``.

    ``f(n) = S + n c - ln(T + n + 1)`` is convex and negative at 0, so the set
    where it is positive is a half-line; doubling then bisection finds its start.
    """

    def positive(n: int) -> bool:
        f = Interval.exact(S + n * c) - _ln(T + n + 1)
        if f.lo_fraction() > 0:
            return True
        if f.hi_fraction() <= 0:
            return False
        raise ConstructionError(f"sign of the crossing test at n={n} is not resolved at this precision")

    if positive(1):
        return 1
    lo, hi = 1, 2
    while not positive(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if positive(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _checkpoints(w: OscillationWitness) -> tuple:
    T, S, out = 0, Fraction(0), []
    for c, N in w.stages:
        T += N
        S += N * c
        out.append((T, Interval.exact(S) / _ln(T + 1)))
    return tuple(out)


def oscillating_verify(w: OscillationWitness, depth: int | None = None) -> dict:
    """Recheck a witness at its recorded precision plus 20 digits.

    Candidates are every block start and block end (the ratio is quasi-convex
    inside a constant block), truncated to the first ``depth`` stages if given.
    """
    stages = w.stages if depth is None else w.stages[:depth]
    tol = Fraction(1, 10 ** (w.precision - 10))
    failures = []
    with precision(w.precision + 20):
        T, S = 0, Fraction(0)
        cand_max = Interval.exact(0)
        odd, even = [], []
        prev_c = None
        for k, (c, N) in enumerate(stages, start=1):
            if prev_c is not None and c > prev_c:
                failures.append({"stage": k, "check": "c_k nonincreasing"})
            prev_c = c
            first = Interval.exact(S + c) / _ln(T + 2)
            T += N
            S += N * c
            r = Interval.exact(S) / _ln(T + 1)
            cand_max = cand_max.hull(first).hull(r)
            if k % 2:
                odd.append(r)
                if not (r.lo_fraction() >= 1 - tol and r.hi_fraction() <= 1 + tol):
                    failures.append({"stage": k, "check": "odd checkpoint = 1", "index": T})
            else:
                even.append(r)
                if not r.certainly_le(Fraction(1, 2)):
                    failures.append({"stage": k, "check": "even checkpoint <= 1/2", "index": T})
        bounded = cand_max.certainly_le(2)
        if not bounded:
            failures.append({"check": "candidate ratios <= 2"})
        gap = None
        if odd and even:
            gap = min(r.lo_fraction() for r in odd) - max(r.hi_fraction() for r in even)
            if gap < Fraction(1, 2):
                failures.append({"check": "limsup - liminf >= 1/2", "gap": gap})
        norm = marcinkiewicz_norm(w.psi, Blocks(tuple(stages), Fraction(0)))
    return {
        "stages_checked": len(stages),
        "odd_checkpoints": odd,
        "even_checkpoints": even,
        "candidate_max": cand_max,
        "marcinkiewicz_norm": norm.value,
        "oscillation_gap": gap,
        "tolerance": tol,
        "failures": failures,
        "ok": not failures,
    }
