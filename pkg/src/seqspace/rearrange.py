"""Rearrangement-type operators: ``x*``, closing up, ``x_pi``, ``x_I`` and ``s_n``."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import EXPAND_LIMIT, blocks_of, periodic_of
from .errors import UnsupportedCombination
from .sequences import ZERO, Blocks, Catalog, Finite, Periodic, Sequence, catalog

# ---------------------------------------------------------------------------
# index maps


@dataclass(frozen=True)
class FinitePermutation:
    """Bijection of ``{1..K}`` given as ``(sigma(1), ..., sigma(K))``; identity beyond K."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError("FinitePermutation mapping must be a bijection of {1..K}")
        object.__setattr__(self, "mapping", m)

    @property
    def K(self) -> int:
        return len(self.mapping)

    def __call__(self, n: int) -> int:
        return self.mapping[n - 1] if n <= len(self.mapping) else n

    def inverse(self) -> "FinitePermutation":
        inv = [0] * len(self.mapping)
        for i, v in enumerate(self.mapping, start=1):
            inv[v - 1] = i
        return FinitePermutation(tuple(inv))


@dataclass(frozen=True)
class FiniteInjection:
    """Injective map on a finite domain, ``((n, pi(n)), ...)``; unread positions are 0."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        dom = [a for a, _ in pairs]
        img = [b for _, b in pairs]
        if len(set(dom)) != len(dom) or len(set(img)) != len(img) or any(v < 1 for v in dom + img):
            raise ValueError("FiniteInjection must be an injective map between positive integers")
        object.__setattr__(self, "pairs", pairs)


NAMED_MAPS = ("shift", "dilation2", "evens_to_all", "odds_to_all", "interleave_with_zeros")


@dataclass(frozen=True)
class Named:
    """Structured maps usable on every kind.

    ``shift``: ``y_n = x_{n+k}``; ``dilation2``: ``(x1, x1, x2, x2, ...)``;
    ``evens_to_all``: ``y_n = x_{2n}``; ``odds_to_all``: ``y_n = x_{2n-1}``;
    ``interleave_with_zeros``: ``(x1, 0, x2, 0, ...)``.
    """

    name: str
    k: int = 0

    def __post_init__(self):
        if self.name not in NAMED_MAPS:
            raise ValueError(f"unknown named map {self.name!r}")
        if self.name == "shift" and (not isinstance(self.k, int) or self.k < 0):
            raise ValueError("shift needs k >= 0")

    @property
    def injective_read(self) -> bool:
        """True when the result is ``x_pi`` for an injective ``pi``."""
        return self.name in ("shift", "evens_to_all", "odds_to_all")


InjectionSpec = Union[FinitePermutation, FiniteInjection, Named]


def is_injective_read(pi: InjectionSpec) -> bool:
    if isinstance(pi, Named):
        return pi.injective_read
    return True


@dataclass(frozen=True)
class IndexSet:
    """``explicit``, ``evens``, ``odds`` or ``complement`` (of an explicit finite set)."""

    kind: str
    members: tuple = ()

    def __post_init__(self):
        if self.kind not in ("explicit", "evens", "odds", "complement"):
            raise ValueError(f"unknown index set kind {self.kind!r}")
        m = tuple(sorted(set(int(i) for i in self.members)))
        if any(i < 1 for i in m):
            raise ValueError("index sets contain positive integers")
        object.__setattr__(self, "members", m)

    def __contains__(self, n: int) -> bool:
        if self.kind == "explicit":
            return n in self.members
        if self.kind == "complement":
            return n not in self.members
        return n % 2 == (0 if self.kind == "evens" else 1)

    def complement(self) -> "IndexSet":
        flip = {"explicit": "complement", "complement": "explicit", "evens": "odds", "odds": "evens"}
        return IndexSet(flip[self.kind], self.members)


# ---------------------------------------------------------------------------
# decreasing rearrangement


def _sorted_blocks(counter: Counter) -> tuple:
    return tuple((v, counter[v]) for v in sorted(counter, reverse=True))


def decreasing_rearrangement(x: Sequence) -> Sequence:
    """``x*``: distinct absolute values in decreasing order with multiplicities.

    The first value occurring infinitely often becomes a constant tail and
    hides everything smaller.
    """
    if isinstance(x, Finite):
        return Finite.from_list(sorted((abs(v) for v in x.values), reverse=True))
    if isinstance(x, Blocks):
        t = abs(x.tail)
        cnt: Counter = Counter()
        for v, c in x.blocks:
            if abs(v) > t:
                cnt[abs(v)] += c
        return Blocks(_sorted_blocks(cnt), t)
    if isinstance(x, Periodic):
        m = max(abs(v) for v in x.pattern)
        cnt = Counter(abs(v) for v in x.prefix_values if abs(v) > m)
        return Blocks(_sorted_blocks(cnt), m)
    if isinstance(x, Catalog):
        return _catalog_rearrangement(x)
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def _catalog_rearrangement(x: Catalog) -> Sequence:
    c = abs(x.coef)
    patched = set(i for i, _ in x.patch)
    extra = sorted((abs(v) for _, v in x.patch if v != 0), reverse=True)
    top = x.patch_max
    head: list[Fraction] = []
    m = 1

    def next_free(k: int) -> int:
        while k in patched:
            k += 1
        return k

    m = next_free(m)
    i = 0
    while i < len(extra) or m <= top:
        u = c / (x.a * m + x.b)
        if i < len(extra) and extra[i] >= u:
            head.append(extra[i])
            i += 1
        else:
            head.append(u)
            m = next_free(m + 1)
        if len(head) > EXPAND_LIMIT:
            raise UnsupportedCombination("catalog rearrangement head too long to represent")
    h = len(head)
    # for n > h: x*_n = c / (a * (m + n - h - 1) + b)
    b_new = x.b + x.a * (m - h - 1)
    return catalog(c, x.a, b_new, tuple(enumerate(head, start=1)))


# ---------------------------------------------------------------------------
# closing up


def closing_up(x: Sequence) -> Sequence:
    """``x'``: the non-zero terms of ``x`` in order, zero-padded if finitely many."""
    if isinstance(x, Finite):
        return Finite.from_list(x.values)
    if isinstance(x, Blocks):
        return Blocks(tuple((v, c) for v, c in x.blocks if v != 0), x.tail)
    if isinstance(x, Periodic):
        head = tuple(v for v in x.prefix_values if v != 0)
        pat = tuple(v for v in x.pattern if v != 0)
        if not pat:
            return Finite.from_list(head)
        return Periodic(pat, head)
    if isinstance(x, Catalog):
        top = x.patch_max
        head = [v for v in x.prefix(top) if v != 0]
        h = len(head)
        return catalog(x.coef, x.a, x.b + x.a * (top - h), tuple(enumerate(head, start=1)))
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


# ---------------------------------------------------------------------------
# x_pi


def apply_map(x: Sequence, pi: InjectionSpec) -> Sequence:
    """``y_n = x_{pi(n)}`` (with the conventions documented on each map type)."""
    if isinstance(pi, FinitePermutation):
        return _apply_permutation(x, pi)
    if isinstance(pi, FiniteInjection):
        if not isinstance(x, Finite):
            raise UnsupportedCombination("FiniteInjection applies to finite-support sequences only")
        return Finite(tuple((n, x.term(m)) for n, m in pi.pairs))
    if isinstance(pi, Named):
        return _apply_named(x, pi)
    raise TypeError(f"unknown map {pi!r}")


def _apply_permutation(x: Sequence, sigma: FinitePermutation) -> Sequence:
    K = sigma.K
    if isinstance(x, Finite):
        inv = sigma.inverse()
        return Finite(tuple((inv(i), v) for i, v in x.entries))
    head = tuple(x.term(sigma(n)) for n in range(1, K + 1))
    if isinstance(x, Blocks):
        rest = _drop_blocks(x, K)
        return Blocks(tuple((v, 1) for v in head) + rest.blocks, rest.tail)
    if isinstance(x, Periodic):
        y = periodic_of(x)
        p = max(len(y.prefix_values), K)
        vals = [x.term(sigma(n)) for n in range(1, p + y.period + 1)]
        return Periodic(tuple(vals[p:]), tuple(vals[:p]))
    if isinstance(x, Catalog):
        top = max(K, x.patch_max)
        return catalog(x.coef, x.a, x.b, tuple((n, x.term(sigma(n))) for n in range(1, top + 1)))
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def _drop_blocks(x: Blocks, k: int) -> Blocks:
    """``(x_{k+1}, x_{k+2}, ...)`` for block sequences."""
    out = []
    for v, c in x.blocks:
        if k >= c:
            k -= c
            continue
        out.append((v, c - k))
        k = 0
    return Blocks(tuple(out), x.tail)


def _periodic_from_terms(f, p: int, L: int) -> Periodic:
    vals = [f(n) for n in range(1, p + L + 1)]
    return Periodic(tuple(vals[p:]), tuple(vals[:p]))


def _apply_named(x: Sequence, pi: Named) -> Sequence:
    name = pi.name
    if isinstance(x, Finite):
        if name == "shift":
            return Finite(tuple((i - pi.k, v) for i, v in x.entries if i > pi.k))
        if name == "dilation2":
            return Finite(tuple(e for i, v in x.entries for e in ((2 * i - 1, v), (2 * i, v))))
        if name == "evens_to_all":
            return Finite(tuple((i // 2, v) for i, v in x.entries if i % 2 == 0))
        if name == "odds_to_all":
            return Finite(tuple(((i + 1) // 2, v) for i, v in x.entries if i % 2 == 1))
        return Finite(tuple((2 * i - 1, v) for i, v in x.entries))
    if isinstance(x, Blocks):
        if name == "shift":
            return _drop_blocks(x, pi.k)
        if name == "dilation2":
            return Blocks(tuple((v, 2 * c) for v, c in x.blocks), x.tail)
        if name in ("evens_to_all", "odds_to_all"):
            out, start = [], 0
            for v, c in x.blocks:
                end = start + c
                if name == "evens_to_all":
                    cnt = end // 2 - start // 2
                else:
                    cnt = (end + 1) // 2 - (start + 1) // 2
                if cnt:
                    out.append((v, cnt))
                start = end
            return Blocks(tuple(out), x.tail)
        if x.tail == 0 and x.total <= EXPAND_LIMIT:
            return _apply_named(Finite.from_list(x.prefix(x.total)), pi)
        if x.total <= EXPAND_LIMIT:
            return _apply_named(periodic_of(x), pi)
        raise UnsupportedCombination("interleaving huge blocks has no block description")
    if isinstance(x, Periodic):
        p, L = len(x.prefix_values), x.period
        if name == "shift":
            return Periodic(*_shifted_periodic(x, pi.k))
        if name == "dilation2":
            return _periodic_from_terms(lambda n: x.term((n + 1) // 2), 2 * p, 2 * L)
        if name == "evens_to_all":
            return _periodic_from_terms(lambda n: x.term(2 * n), p, L)
        if name == "odds_to_all":
            return _periodic_from_terms(lambda n: x.term(2 * n - 1), p, L)
        return _periodic_from_terms(lambda n: x.term((n + 1) // 2) if n % 2 else ZERO, 2 * p, 2 * L)
    if isinstance(x, Catalog):
        if name == "shift":
            k = pi.k
            patch = tuple((i - k, v) for i, v in x.patch if i > k)
            return catalog(x.coef, x.a, x.b + x.a * k, patch)
        if name == "evens_to_all":
            patch = tuple((i // 2, v) for i, v in x.patch if i % 2 == 0)
            return catalog(x.coef, 2 * x.a, x.b, patch)
        if name == "odds_to_all":
            patch = tuple(((i + 1) // 2, v) for i, v in x.patch if i % 2 == 1)
            return catalog(x.coef, 2 * x.a, x.b - x.a, patch)
        raise UnsupportedCombination(f"{name} of a catalog sequence is not representable")
    raise TypeError(f"unknown sequence kind {type(x).__name__}")


def _shifted_periodic(x: Periodic, k: int):
    p, L = len(x.prefix_values), x.period
    if k <= p:
        return x.pattern, x.prefix_values[k:]
    r = (k - p) % L
    return x.pattern[r:] + x.pattern[:r], ()


# ---------------------------------------------------------------------------
# x_I


def restrict(x: Sequence, I: IndexSet) -> Sequence:
    """``(x_I)_n = x_n`` for ``n`` in ``I``, else 0."""
    if I.kind == "explicit":
        return Finite(tuple((n, x.term(n)) for n in I.members))
    if isinstance(x, Finite):
        return Finite(tuple((i, v) for i, v in x.entries if i in I))
    if I.kind == "complement":
        drop = set(I.members)
        if isinstance(x, Blocks):
            out, pos = [], 0
            for v, c in x.blocks:
                start, end = pos + 1, pos + c
                cut = sorted(i for i in drop if start <= i <= end)
                cur = start
                for i in cut:
                    if i > cur:
                        out.append((v, i - cur))
                    out.append((ZERO, 1))
                    cur = i + 1
                if cur <= end:
                    out.append((v, end - cur + 1))
                pos = end
            beyond = sorted(i for i in drop if i > pos)
            for i in beyond:
                if i > pos + 1:
                    out.append((x.tail, i - pos - 1))
                out.append((ZERO, 1))
                pos = i
            return Blocks(tuple(out), x.tail)
        if isinstance(x, Periodic):
            p = max([len(x.prefix_values)] + list(I.members))
            return _periodic_from_terms(lambda n: ZERO if n in drop else x.term(n), p, x.period)
        if isinstance(x, Catalog):
            top = max([x.patch_max] + list(I.members))
            patch = tuple((n, ZERO if n in drop else x.term(n)) for n in range(1, top + 1))
            return catalog(x.coef, x.a, x.b, patch)
    # evens / odds
    if isinstance(x, Periodic) or (isinstance(x, Blocks) and x.total <= EXPAND_LIMIT):
        y = periodic_of(x)
        p = len(y.prefix_values)
        out = _periodic_from_terms(lambda n: y.term(n) if n in I else ZERO, p, 2 * y.period)
        if isinstance(x, Blocks) and out.period == 1:
            return blocks_of(out)
        return out
    raise UnsupportedCombination(f"restricting a {x.kind} sequence to {I.kind} is not representable")


# ---------------------------------------------------------------------------
# s_n


def partial_sums(x: Sequence, N: int) -> list[Fraction]:
    """``(s_1(x), ..., s_N(x))`` with ``s_n`` the sum of the first n terms of ``x*``."""
    if N < 1:
        raise ValueError("N must be positive")
    out, total = [], ZERO
    for v in decreasing_rearrangement(x).prefix(N):
        total += v
        out.append(total)
    return out


def rearranged_sum(xstar: Sequence, n: int) -> Fraction:
    """``s_n`` for an already rearranged sequence, fast for huge block counts."""
    if isinstance(xstar, Blocks):
        total, pos = ZERO, 0
        for v, c in xstar.blocks:
            take = min(c, n - pos)
            total += v * take
            pos += take
            if pos >= n:
                return total
        return total + xstar.tail * (n - pos)
    return sum(xstar.prefix(n), ZERO)
