from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqspace.algebra import absolute, add, multiply, neg_part, negate, pointwise_algebra, pos_part, scale, subtract
from seqspace.errors import ConfigurationError, UnsupportedCombination
from seqspace.sequences import MAX_PREFIX, Blocks, Catalog, Finite, Periodic, catalog, constant, eval_prefix, harmonic, unit_vector

fracs = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@st.composite
def sequences(draw):
    kind = draw(st.sampled_from(["finite", "blocks", "periodic", "catalog"]))
    if kind == "finite":
        return Finite.from_list(draw(st.lists(fracs, max_size=8)))
    if kind == "blocks":
        blocks = draw(st.lists(st.tuples(fracs, st.integers(1, 5)), max_size=4))
        return Blocks(tuple(blocks), draw(fracs))
    if kind == "periodic":
        return Periodic(tuple(draw(st.lists(fracs, min_size=1, max_size=4))), tuple(draw(st.lists(fracs, max_size=3))))
    coef = draw(fracs.filter(lambda q: q != 0))
    patch = draw(st.dictionaries(st.integers(1, 6), fracs, max_size=3))
    return Catalog("harmonic", coef, draw(st.integers(1, 3)), draw(st.integers(0, 3)), tuple(patch.items()))


def test_finite_drops_zeros_and_sorts():
    x = Finite(((3, 1), (1, F(1, 2)), (2, 0)))
    assert x.entries == ((1, F(1, 2)), (3, F(1)))
    assert x.prefix(4) == [F(1, 2), 0, 1, 0]
    assert x.has_finite_support and x.regular_from() == 4


def test_finite_rejects_bad_index():
    with pytest.raises(ValueError):
        Finite(((0, 1),))
    with pytest.raises(ValueError):
        Finite(((2, 1), (2, 3)))


def test_blocks_canonical_form():
    x = Blocks(((1, 2), (1, 3), (5, 1), (5, 4)), 5)
    assert x.blocks == ((F(1), 5),)
    assert x.tail == 5 and x.term(6) == 5 and x.term(5) == 1


def test_blocks_huge_counts():
    x = Blocks(((F(1, 3), 10**30),))
    assert x.term(10**30) == F(1, 3) and x.term(10**30 + 1) == 0


def test_periodic_reduces_pattern():
    x = Periodic((1, 0, 1, 0), (0,))
    assert x.pattern == (F(0), F(1)) and x.prefix_values == ()
    assert x.prefix(4) == [0, 1, 0, 1]


def test_catalog_harmonic_and_patch():
    h = harmonic()
    assert h.prefix(3) == [1, F(1, 2), F(1, 3)]
    c = Catalog("harmonic", F(2), 2, 1, ((1, 7), (3, F(2, 7))))
    assert c.patch == ((1, F(7)),)
    assert c.term(2) == F(2, 5)
    assert catalog(0, patch=((2, 1),)) == unit_vector(2)


def test_catalog_requires_positive_denominator():
    with pytest.raises(ValueError):
        Catalog("harmonic", 1, 1, -1)


def test_eval_prefix_limits():
    with pytest.raises(ValueError):
        eval_prefix(harmonic(), 0)
    with pytest.raises(ConfigurationError):
        eval_prefix(harmonic(), MAX_PREFIX + 1)


def test_constant_and_unit_vector():
    assert constant(2).prefix(3) == [2, 2, 2]
    assert unit_vector(3, F(1, 2)).prefix(3) == [0, 0, F(1, 2)]


def test_mixed_kind_addition():
    s = add(harmonic(), unit_vector(1, -1))
    assert s.prefix(3) == [0, F(1, 2), F(1, 3)]
    assert add(Periodic((1, 0)), constant(1)).prefix(4) == [2, 1, 2, 1]


def test_pointwise_algebra_dispatch():
    x = Finite.from_list([1, -2])
    assert pointwise_algebra("abs", x).prefix(2) == [1, 2]
    assert pointwise_algebra("scale", x, lam=3).prefix(2) == [3, -6]
    assert pointwise_algebra("add", x, x).prefix(2) == [2, -4]


@given(sequences(), sequences())
def test_algebra_matches_termwise(x, y):
    N = 20
    px, py = x.prefix(N), y.prefix(N)
    try:
        s = add(x, y)
    except UnsupportedCombination:
        # Catalog is closed only under finite perturbations and same-grid sums
        assert isinstance(x, Catalog) or isinstance(y, Catalog)
        assert not (x.has_finite_support or y.has_finite_support)
        return
    assert s.prefix(N) == [a + b for a, b in zip(px, py)]
    assert subtract(x, y).prefix(N) == [a - b for a, b in zip(px, py)]
    if not (isinstance(x, Catalog) and isinstance(y, Catalog)):
        assert multiply(x, y).prefix(N) == [a * b for a, b in zip(px, py)]


@given(sequences())
def test_parts_decompose(x):
    N = 20
    p, n = pos_part(x).prefix(N), neg_part(x).prefix(N)
    assert [a - b for a, b in zip(p, n)] == x.prefix(N)
    assert absolute(x).prefix(N) == [a + b for a, b in zip(p, n)]
    assert all(v >= 0 for v in p + n)
    assert negate(x).prefix(N) == scale(-1, x).prefix(N)


@given(sequences())
def test_sup_abs_dominates_prefix(x):
    assert max(abs(v) for v in x.prefix(30)) <= x.sup_abs()
