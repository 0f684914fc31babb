from fractions import Fraction as F
from itertools import combinations
import math

from hypothesis import given
from hypothesis import strategies as st

from seqspace import garling as g
from seqspace.scalar import Interval

vals = st.lists(st.fractions(-5, 5, max_denominator=9), min_size=1, max_size=9)


def float_bruteforce(values):
    """Plain float enumeration of every increasing selection."""
    v = [abs(float(q)) for q in values]
    best = 0.0
    for k in range(1, len(v) + 1):
        for sel in combinations(range(len(v)), k):
            best = max(best, sum(v[i] / math.sqrt(j) for j, i in enumerate(sel, start=1)))
    return best


@given(vals)
def test_dp_equals_exhaustive_fixed_point(v):
    assert g.garling_fixed(v) == g.garling_exhaustive_fixed(v)


@given(vals)
def test_interval_brackets_float_bruteforce(v):
    iv = g.garling_interval(v)
    ref = float_bruteforce(v)
    assert float(iv.lo_fraction()) - 1e-12 <= ref <= float(iv.hi_fraction()) + 1e-12
    assert iv.width() < F(1, 10**45)


def test_zeros_do_not_matter():
    assert g.garling_fixed([1, 0, 0, F(1, 2)]) == g.garling_fixed([1, F(1, 2)])


def test_decreasing_input_takes_everything():
    # for a nonincreasing nonnegative list the identity selection is optimal
    v = [F(1, n) for n in range(1, 7)]
    ref = g.garling_selection_value(v, range(6))
    assert g.garling_interval(v).intersects(ref)


def test_increasing_input_prefers_a_suffix():
    v = [F(1, 10), F(1)]
    assert g.garling_interval(v).intersects(Interval.exact(1) + Interval.exact(0))


def test_inv_sqrt_sum_bounds():
    exact = sum(1 / math.sqrt(j) for j in range(11, 101))
    assert float(g.inv_sqrt_sum_lower(10, 100).lo_fraction()) <= exact <= float(g.inv_sqrt_sum_upper(10, 100).hi_fraction())
    assert g.inv_sqrt_sum_upper(5, 5).is_point


def test_weights_bracket():
    lo, hi = g.weights_fixed(4, 64)
    for j in range(1, 5):
        assert lo[j] ** 2 * j <= 2**128 <= hi[j] ** 2 * j
