from fractions import Fraction as F

import pytest
from mpmath import mp, mpf

from seqspace import garling as g
from seqspace.errors import ConstructionError
from seqspace.scalar import Interval
from seqspace.spaces import LogBase
from seqspace.witnesses import (
    garling_growth,
    garling_witness,
    oscillating_construct,
    oscillating_verify,
    renorm_contradiction,
    weighted_l1_witness,
)

import oracle_oscillation


def test_weighted_l1_witness():
    r = weighted_l1_witness()
    assert r["e1"] == F(1, 2) and r["others_equal_one"] and r["norm_not_symmetric"]
    assert r["membership_swap_invariant"]


def test_renorm_contradiction():
    r = renorm_contradiction()
    assert r["norm_ones"] == 2 and r["norm_alternating"] == F(3, 2)
    assert r["same_rearrangement"] and r["inconsistent"]


@pytest.mark.parametrize("m", [2, 4, 100])
def test_garling_witness(m):
    w = garling_witness(m)
    assert w.x_contains_harmonic and w.x_error < F(1, 10**12)
    assert w.y_bounded and w.differ


def test_garling_witness_small_m_matches_exhaustive():
    for m in range(2, 9):
        vals = [Interval.exact(1) / Interval.exact(n).sqrt() for n in range(1, m + 1)]
        mids = [v.mid() for v in vals]
        assert g.garling_fixed(mids) == g.garling_exhaustive_fixed(mids)
        assert g.garling_fixed(mids[::-1]) == g.garling_exhaustive_fixed(mids[::-1])


def test_garling_witness_rejects_m1():
    with pytest.raises(ValueError):
        garling_witness(1)


def test_garling_growth():
    r = garling_growth(3)
    # H_m > 3 first happens at m = 11, so the first dyadic m is 16
    assert r["reached"] and r["m"] == 16
    assert all(ny.hi_fraction() < 5 for _, _, ny in r["trace"])


def test_oscillation_matches_oracle():
    w = oscillating_construct(4)
    ref = oracle_oscillation.recurrence(4, dps=90)
    assert [N for _, N in w.stages] == [N for _, N in ref] == [1, 14, 60, 33362100]
    with mp.workdps(90):
        for (c, _), (rc, _) in zip(w.stages, ref):
            assert abs(mpf(c.numerator) / c.denominator - rc) < mpf(10) ** -45


def test_oscillation_checkpoints_alternate():
    w = oscillating_construct(4)
    ratios = oracle_oscillation.checkpoint_ratios(4)
    for (T, r), ref in zip(w.checkpoints, ratios):
        assert r.lo_fraction() - F(1, 10**40) <= F(str(mp.nstr(ref, 60))) <= r.hi_fraction() + F(1, 10**40)


def test_oscillation_verify_five_stages():
    w = oscillating_construct(5)
    r = oscillating_verify(w)
    assert r["ok"], r["failures"]
    assert r["oscillation_gap"] >= F(1, 2)
    assert r["candidate_max"].certainly_le(2)
    assert r["marcinkiewicz_norm"].certainly_le(2)


def test_oscillation_verify_detects_tampering():
    w = oscillating_construct(3)
    c, N = w.stages[1]
    bad = type(w)((w.stages[0], (c * 2, N), w.stages[2]), w.checkpoints, w.sup_bound, w.psi, w.precision, w.delta_digits)
    assert not oscillating_verify(bad)["ok"]


def test_oscillation_needs_ln_psi():
    with pytest.raises(ValueError):
        oscillating_construct(3, psi=LogBase(F(2)))
    with pytest.raises(ValueError):
        oscillating_construct(1)
