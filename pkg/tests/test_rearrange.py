from fractions import Fraction as F
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqspace.errors import UnsupportedCombination
from seqspace.rearrange import (
    FiniteInjection,
    FinitePermutation,
    IndexSet,
    Named,
    apply_map,
    closing_up,
    decreasing_rearrangement,
    partial_sums,
    rearranged_sum,
    restrict,
)
from seqspace.sequences import Blocks, Catalog, Finite, Periodic, constant, harmonic, unit_vector
from seqspace.verify import gen_any, rearrangement_oracle

from test_sequences import sequences


def brute_star(x, N, horizon=400):
    """Sort a long prefix; only valid when the tail can't beat what is kept."""
    return sorted((abs(v) for v in x.prefix(horizon)), reverse=True)[:N]


def test_finite_rearrangement():
    x = Finite.from_list([F(-1, 2), 3, 0, 1])
    assert decreasing_rearrangement(x).prefix(5) == [3, 1, F(1, 2), 0, 0]


def test_periodic_rearrangement_is_constant_sup():
    assert decreasing_rearrangement(Periodic((1, 0))) == constant(1)
    assert decreasing_rearrangement(Periodic((1, -2), (5,))).prefix(3) == [5, 2, 2]


def test_blocks_rearrangement_with_tail():
    x = Blocks(((F(1, 4), 3), (2, 1)), F(1, 2))
    # the tail value 1/2 is attained infinitely often, so 1/4 never appears
    assert decreasing_rearrangement(x).prefix(4) == [2, F(1, 2), F(1, 2), F(1, 2)]


def test_harmonic_is_its_own_rearrangement():
    h = harmonic()
    assert decreasing_rearrangement(h).prefix(50) == h.prefix(50)
    y = Catalog("harmonic", F(-1), 1, 0, ((1, F(1, 10)), (2, 0)))
    assert decreasing_rearrangement(y).prefix(4) == [F(1, 3), F(1, 4), F(1, 5), F(1, 6)]
    assert rearrangement_oracle(y, 12) == decreasing_rearrangement(y).prefix(12)


@given(sequences())
def test_rearrangement_matches_oracle(x):
    assert decreasing_rearrangement(x).prefix(32) == rearrangement_oracle(x, 32)


def test_rearrangement_matches_oracle_on_generators():
    rng = random.Random(11)
    for _ in range(300):
        x = gen_any(rng)
        assert decreasing_rearrangement(x).prefix(64) == rearrangement_oracle(x, 64), x


@given(sequences())
def test_rearrangement_is_nonincreasing_and_idempotent(x):
    s = decreasing_rearrangement(x)
    p = s.prefix(40)
    assert all(a >= b >= 0 for a, b in zip(p, p[1:]))
    assert decreasing_rearrangement(s).prefix(40) == p


@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=10), st.randoms())
def test_permutation_invariance(vals, r):
    x = Finite.from_list(vals)
    perm = list(range(1, len(vals) + 1))
    r.shuffle(perm)
    y = apply_map(x, FinitePermutation(tuple(perm)))
    assert sorted(y.values) == sorted(x.values)
    assert decreasing_rearrangement(y) == decreasing_rearrangement(x)


def test_permutation_on_infinite_kinds():
    sigma = FinitePermutation((3, 1, 2))
    for x in (harmonic(), Periodic((1, 2, 5)), Blocks(((1, 2), (4, 1)), 3)):
        y = apply_map(x, sigma)
        assert y.prefix(10) == [x.term(sigma(n)) for n in range(1, 11)]


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        FinitePermutation((1, 1))
    assert FinitePermutation((2, 3, 1)).inverse() == FinitePermutation((3, 1, 2))


def test_injection_reads_and_zero_fills():
    x = Finite.from_list([1, 2, 3])
    y = apply_map(x, FiniteInjection(((1, 3), (4, 1))))
    assert y.prefix(5) == [3, 0, 0, 1, 0]
    with pytest.raises(UnsupportedCombination):
        apply_map(harmonic(), FiniteInjection(((1, 2),)))
    with pytest.raises(ValueError):
        FiniteInjection(((1, 2), (2, 2)))


@pytest.mark.parametrize("x", [harmonic(), Periodic((1, 2, 3)), Blocks(((1, 3), (2, 2)), 5), Finite.from_list([1, 0, 2])])
@pytest.mark.parametrize("pi,read", [
    (Named("shift", 2), lambda x, n: x.term(n + 2)),
    (Named("dilation2"), lambda x, n: x.term((n + 1) // 2)),
    (Named("evens_to_all"), lambda x, n: x.term(2 * n)),
    (Named("odds_to_all"), lambda x, n: x.term(2 * n - 1)),
    (Named("interleave_with_zeros"), lambda x, n: x.term((n + 1) // 2) if n % 2 else 0),
])
def test_named_maps(x, pi, read):
    if isinstance(x, Catalog) and pi.name in ("dilation2", "interleave_with_zeros"):
        # coef/(a n + b) is not closed under repeating or spreading out terms
        with pytest.raises(UnsupportedCombination):
            apply_map(x, pi)
        return
    y = apply_map(x, pi)
    assert y.prefix(16) == [read(x, n) for n in range(1, 17)]


def test_named_map_validation():
    with pytest.raises(ValueError):
        Named("rotate")
    with pytest.raises(ValueError):
        Named("shift", -1)


@pytest.mark.parametrize("x", [harmonic(), Periodic((0, 1, 2)), Blocks(((0, 2), (3, 1), (0, 1)), 1), Finite.from_list([0, 1, 0, 2])])
def test_closing_up(x):
    y = closing_up(x)
    nz = [v for v in x.prefix(60) if v != 0]
    assert y.prefix(len(nz[:30])) == nz[:30]


def test_closing_up_finite_pads_zeros():
    assert closing_up(Finite(((3, 1), (7, 2)))).prefix(4) == [1, 2, 0, 0]


@pytest.mark.parametrize("I", [IndexSet("evens"), IndexSet("odds"), IndexSet("explicit", (1, 4)), IndexSet("complement", (2, 3))])
@pytest.mark.parametrize("x", [harmonic(), Periodic((1, 2, 3)), Blocks(((1, 3),), 2), Finite.from_list([1, 2, 3, 4, 5])])
def test_restrict(I, x):
    try:
        y = restrict(x, I)
    except UnsupportedCombination:
        assert isinstance(x, Catalog) and I.kind in ("evens", "odds")
        return
    assert y.prefix(20) == [x.term(n) if n in I else 0 for n in range(1, 21)]


def test_index_set_complement():
    assert IndexSet("evens").complement() == IndexSet("odds")
    assert 3 in IndexSet("explicit", (3,)).complement().complement()


def test_partial_sums_and_big_blocks():
    assert partial_sums(Finite.from_list([1, 3, 2]), 4) == [3, 5, 6, 6]
    big = Blocks(((F(1, 2), 10**20), (F(1), 5)))
    star = decreasing_rearrangement(big)
    assert rearranged_sum(star, 10**12) == 5 + F(10**12 - 5, 2)
    with pytest.raises(ValueError):
        partial_sums(unit_vector(1), 0)


def test_brute_star_sanity():
    x = Finite.from_list([2, -5, 1])
    assert brute_star(x, 3) == decreasing_rearrangement(x).prefix(3)
