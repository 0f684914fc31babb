"""Garling norm ``sup over increasing phi of sum |x_phi(n)| / sqrt(n)``.

For a finite list of values the supremum is attained by choosing a
subsequence of the non-zero values (in index order) and giving its j-th
element the weight ``1/sqrt(j)``.  That is a two-index dynamic program

    best(i, j) = max(best(i+1, j), |v_i|/sqrt(j) + best(i+1, j+1))

run here in fixed point twice, once with every quantity rounded down and once
rounded up, so the pair of results brackets the true value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from operator import add
from typing import Sequence as Seq

from .scalar import Interval, prec_bits


def fixed_bits(digits: int | None = None) -> int:
    return prec_bits(digits) + 8


def to_fixed(q: Fraction, bits: int, up: bool) -> int:
    num = abs(q.numerator) << bits
    den = q.denominator
    return -(-num // den) if up else num // den


def inv_sqrt_fixed(j: int, bits: int) -> tuple[int, int]:
    """Floor and an upper bound of ``2**bits / sqrt(j)``."""
    lo = math.isqrt((1 << (2 * bits)) // j)
    return lo, lo + 1


def weights_fixed(K: int, bits: int) -> tuple[list[int], list[int]]:
    lo, hi = [0], [0]
    for j in range(1, K + 1):
        a, b = inv_sqrt_fixed(j, bits)
        lo.append(a)
        hi.append(b)
    return lo, hi


def _dp(v: list[int], w: list[int], bits: int, up: bool) -> int:
    K = len(v)
    nxt = [0] * (K + 2)
    for i in range(K, 0, -1):
        vi = v[i - 1]
        if vi == 0:
            continue
        if up:
            gains = [-(-(vi * wj) >> bits) for wj in w[1:i + 1]]
        else:
            gains = [(vi * wj) >> bits for wj in w[1:i + 1]]
        take = list(map(add, gains, nxt[2:i + 2]))
        nxt[1:i + 1] = list(map(max, nxt[1:i + 1], take))
    return nxt[1]


def garling_fixed(values: Seq[Fraction], digits: int | None = None) -> tuple[int, int, int]:
    """``(lo, hi, bits)`` with ``lo / 2**bits <= ||x||_g <= hi / 2**bits``."""
    bits = fixed_bits(digits)
    vals = [v for v in values if v != 0]
    K = len(vals)
    w_lo, w_hi = weights_fixed(K, bits)
    v_lo = [to_fixed(v, bits, up=False) for v in vals]
    v_hi = [to_fixed(v, bits, up=True) for v in vals]
    return _dp(v_lo, w_lo, bits, up=False), _dp(v_hi, w_hi, bits, up=True), bits


def garling_interval(values: Seq[Fraction], digits: int | None = None) -> Interval:
    lo, hi, bits = garling_fixed(values, digits)
    scale = 1 << bits
    return Interval.hull_of(Fraction(lo, scale), Fraction(hi, scale))


def garling_exhaustive_fixed(values: Seq[Fraction], digits: int | None = None) -> tuple[int, int, int]:
    """Same bracket as :func:`garling_fixed`, by enumerating every increasing selection.

    Exponential; used as the test oracle for small inputs.
    """
    bits = fixed_bits(digits)
    vals = [v for v in values if v != 0]
    K = len(vals)
    w_lo, w_hi = weights_fixed(K, bits)
    v_lo = [to_fixed(v, bits, up=False) for v in vals]
    v_hi = [to_fixed(v, bits, up=True) for v in vals]
    best_lo = best_hi = 0
    for mask in range(1, 1 << K):
        s_lo = s_hi = 0
        j = 0
        for i in range(K):
            if mask >> i & 1:
                j += 1
                s_lo += (v_lo[i] * w_lo[j]) >> bits
                s_hi += -(-(v_hi[i] * w_hi[j]) >> bits)
        best_lo = max(best_lo, s_lo)
        best_hi = max(best_hi, s_hi)
    return best_lo, best_hi, bits


def garling_selection_value(values: Seq[Fraction], positions: Seq[int]) -> Interval:
    """Enclosure of ``sum_j |values[positions[j]]| / sqrt(j+1)`` for one selection."""
    total = Interval.exact(0)
    for j, i in enumerate(positions, start=1):
        total = total + Interval.exact(abs(values[i])) / Interval.exact(j).sqrt()
    return total


def inv_sqrt_sum_upper(start: int, end: int) -> Interval:
    """Upper enclosure of ``sum_{j=start+1}^{end} 1/sqrt(j)`` via ``2(sqrt(end) - sqrt(start))``."""
    if end <= start:
        return Interval.exact(0)
    return 2 * (Interval.exact(end).sqrt() - Interval.exact(start).sqrt())


def inv_sqrt_sum_lower(start: int, end: int) -> Interval:
    """Lower enclosure of ``sum_{j=start+1}^{end} 1/sqrt(j)`` via ``2(sqrt(end+1) - sqrt(start+1))``."""
    if end <= start:
        return Interval.exact(0)
    return 2 * (Interval.exact(end + 1).sqrt() - Interval.exact(start + 1).sqrt())
