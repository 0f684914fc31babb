"""Finitely described bounded real sequences.

Four kinds are supported, all immutable and normalized on construction so that
structural equality is meaningful:

* :class:`Finite`   -- finitely many non-zero entries ``(index, value)``.
* :class:`Blocks`   -- run-length blocks ``(value, count)`` followed by a zero or
  constant tail.  Counts may be astronomically large.
* :class:`Periodic` -- an optional finite prefix followed by a repeating pattern.
* :class:`Catalog`  -- the harmonic family ``coef / (a*n + b)`` with finitely many
  overridden entries (``patch``).  Plain ``Catalog()`` is ``(1, 1/2, 1/3, ...)``.

Indices are 1-based throughout, as in the mathematics.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import ConfigurationError

MAX_PREFIX = 10**7
ZERO = Fraction(0)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise TypeError(f"sequence values must be rational, got {type(v).__name__}")


class Sequence:
    """Common interface of all sequence kinds."""

    kind: str = ""

    def term(self, n: int) -> Fraction:
        raise NotImplementedError

    def prefix(self, N: int) -> list[Fraction]:
        return [self.term(n) for n in range(1, N + 1)]

    def sup_abs(self) -> Fraction:
        raise NotImplementedError

    def regular_from(self) -> int:
        """First index after which the description is purely 'tail'."""
        raise NotImplementedError

    @property
    def has_finite_support(self) -> bool:
        return False


@dataclass(frozen=True)
class Finite(Sequence):
    entries: tuple = ()
    kind = "finite"

    def __post_init__(self):
        cleaned: dict[int, Fraction] = {}
        for idx, val in self.entries:
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 1:
                raise ValueError(f"index must be a positive integer, got {idx!r}")
            if idx in cleaned:
                raise ValueError(f"duplicate index {idx}")
            cleaned[idx] = _frac(val)
        norm = tuple(sorted((i, v) for i, v in cleaned.items() if v != 0))
        object.__setattr__(self, "entries", norm)

    @cached_property
    def _lookup(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def term(self, n: int) -> Fraction:
        return self._lookup.get(n, ZERO)

    def prefix(self, N: int) -> list[Fraction]:
        out = [ZERO] * N
        for i, v in self.entries:
            if i > N:
                break
            out[i - 1] = v
        return out

    def sup_abs(self) -> Fraction:
        return max((abs(v) for _, v in self.entries), default=ZERO)

    def regular_from(self) -> int:
        return self.entries[-1][0] + 1 if self.entries else 1

    @property
    def has_finite_support(self) -> bool:
        return True

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.entries]

    @classmethod
    def from_list(cls, values: Iterable) -> "Finite":
        return cls(tuple((i, v) for i, v in enumerate(values, start=1)))


@dataclass(frozen=True)
class Blocks(Sequence):
    blocks: tuple = ()
    tail: Fraction = ZERO
    kind = "blocks"

    def __post_init__(self):
        tail = _frac(self.tail)
        merged: list[list] = []
        for val, count in self.blocks:
            val = _frac(val)
            if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                raise ValueError(f"block counts must be positive integers, got {count!r}")
            if merged and merged[-1][0] == val:
                merged[-1][1] += count
            else:
                merged.append([val, count])
        while merged and merged[-1][0] == tail:
            merged.pop()
        object.__setattr__(self, "blocks", tuple((v, c) for v, c in merged))
        object.__setattr__(self, "tail", tail)

    @cached_property
    def ends(self) -> list[int]:
        out, total = [], 0
        for _, c in self.blocks:
            total += c
            out.append(total)
        return out

    @property
    def total(self) -> int:
        return self.ends[-1] if self.blocks else 0

    def term(self, n: int) -> Fraction:
        k = bisect.bisect_left(self.ends, n)
        if k < len(self.blocks):
            return self.blocks[k][0]
        return self.tail

    def prefix(self, N: int) -> list[Fraction]:
        out: list[Fraction] = []
        for v, c in self.blocks:
            take = min(c, N - len(out))
            out.extend([v] * take)
            if len(out) >= N:
                return out
        out.extend([self.tail] * (N - len(out)))
        return out

    def sup_abs(self) -> Fraction:
        return max([abs(self.tail)] + [abs(v) for v, _ in self.blocks])

    def regular_from(self) -> int:
        return self.total + 1

    @property
    def has_finite_support(self) -> bool:
        return self.tail == 0


@dataclass(frozen=True)
class Periodic(Sequence):
    pattern: tuple = (ZERO,)
    prefix_values: tuple = ()
    kind = "periodic"

    def __post_init__(self):
        pattern = tuple(_frac(v) for v in self.pattern)
        head = tuple(_frac(v) for v in self.prefix_values)
        if not pattern:
            raise ValueError("periodic pattern must be non-empty")
        L = len(pattern)
        for d in range(1, L + 1):
            if L % d == 0 and pattern == pattern[:d] * (L // d):
                pattern = pattern[:d]
                break
        while head and head[-1] == pattern[-1]:
            pattern = (head[-1],) + pattern[:-1]
            head = head[:-1]
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "prefix_values", head)

    @property
    def period(self) -> int:
        return len(self.pattern)

    def term(self, n: int) -> Fraction:
        p = len(self.prefix_values)
        if n <= p:
            return self.prefix_values[n - 1]
        return self.pattern[(n - p - 1) % len(self.pattern)]

    def sup_abs(self) -> Fraction:
        return max(abs(v) for v in self.prefix_values + self.pattern)

    def regular_from(self) -> int:
        return len(self.prefix_values) + 1


@dataclass(frozen=True)
class Catalog(Sequence):
    """``x_n = coef / (a*n + b)`` except at patched indices."""

    name: str = "harmonic"
    coef: Fraction = Fraction(1)
    a: int = 1
    b: int = 0
    patch: tuple = ()
    kind = "catalog"

    def __post_init__(self):
        if self.name != "harmonic":
            raise ValueError(f"unknown catalog sequence {self.name!r}")
        coef = _frac(self.coef)
        if coef == 0:
            raise ValueError("zero coefficient; use Finite for the patch instead")
        if not isinstance(self.a, int) or self.a < 1 or not isinstance(self.b, int):
            raise ValueError("catalog needs integer a >= 1 and integer b")
        raw = {}
        for idx, val in self.patch:
            if not isinstance(idx, int) or idx < 1 or idx in raw:
                raise ValueError(f"bad patch index {idx!r}")
            raw[idx] = _frac(val)
        n0 = 1
        while n0 in raw:
            n0 += 1
        if self.a * n0 + self.b < 1:
            raise ValueError("catalog denominator must be positive off the patch")
        # drop patch entries that agree with the formula (only where the formula is defined)
        kept = tuple(sorted((i, v) for i, v in raw.items()
                            if self.a * i + self.b < 1 or v != coef / (self.a * i + self.b)))
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "patch", kept)

    @cached_property
    def _lookup(self) -> dict[int, Fraction]:
        return dict(self.patch)

    def formula(self, n: int) -> Fraction:
        return self.coef / (self.a * n + self.b)

    def term(self, n: int) -> Fraction:
        v = self._lookup.get(n)
        return self.formula(n) if v is None else v

    def first_free(self) -> int:
        n = 1
        while n in self._lookup:
            n += 1
        return n

    def sup_abs(self) -> Fraction:
        return max([abs(self.formula(self.first_free()))] + [abs(v) for _, v in self.patch])

    def regular_from(self) -> int:
        return self.patch[-1][0] + 1 if self.patch else 1

    @property
    def patch_max(self) -> int:
        return self.patch[-1][0] if self.patch else 0


def catalog(coef, a: int = 1, b: int = 0, patch=()) -> Sequence:
    """Catalog constructor that degrades to :class:`Finite` when ``coef == 0``."""
    coef = _frac(coef)
    if coef == 0:
        return Finite(tuple(patch))
    return Catalog("harmonic", coef, a, b, tuple(patch))


def harmonic() -> Catalog:
    return Catalog()


def unit_vector(k: int, value=1) -> Finite:
    return Finite(((k, value),))


def constant(c) -> Blocks:
    return Blocks((), _frac(c))


def eval_prefix(x: Sequence, N: int) -> list[Fraction]:
    """``(x_1, ..., x_N)`` exactly."""
    if not isinstance(N, int) or N < 1:
        raise ValueError("N must be a positive integer")
    if N > MAX_PREFIX:
        raise ConfigurationError(f"prefix length {N} exceeds the configured limit {MAX_PREFIX}")
    return x.prefix(N)
