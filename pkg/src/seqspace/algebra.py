"""Pointwise algebra on sequences.

Unary operations never change the kind.  Binary operations need a common
refinement of the two descriptions; when there is none we raise
:class:`UnsupportedCombination` rather than approximate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from .errors import UnsupportedCombination
from .sequences import (
    ZERO,
    Blocks,
    Catalog,
    Finite,
    Periodic,
    Sequence,
    _frac,
    catalog,
)

# largest run-length expansion we are willing to materialize
EXPAND_LIMIT = 10**5


def map_values(x: Sequence, f: Callable[[Fraction], Fraction]) -> Sequence:
    """Apply ``f`` entrywise.  Requires ``f(0) == 0``; catalogs are handled by callers."""
    if isinstance(x, Finite):
        return Finite(tuple((i, f(v)) for i, v in x.entries))
    if isinstance(x, Blocks):
        return Blocks(tuple((f(v), c) for v, c in x.blocks), f(x.tail))
    if isinstance(x, Periodic):
        return Periodic(tuple(f(v) for v in x.pattern), tuple(f(v) for v in x.prefix_values))
    raise TypeError(f"map_values does not handle {x.kind}")


def absolute(x: Sequence) -> Sequence:
    if isinstance(x, Catalog):
        return catalog(abs(x.coef), x.a, x.b, tuple((i, abs(v)) for i, v in x.patch))
    return map_values(x, abs)


def negate(x: Sequence) -> Sequence:
    return scale(Fraction(-1), x)


def scale(lam, x: Sequence) -> Sequence:
    lam = _frac(lam)
    if isinstance(x, Catalog):
        if lam == 0:
            return Finite()
        return catalog(lam * x.coef, x.a, x.b, tuple((i, lam * v) for i, v in x.patch))
    return map_values(x, lambda v: lam * v)


def _pos(v: Fraction) -> Fraction:
    return v if v > 0 else ZERO


def _neg(v: Fraction) -> Fraction:
    return -v if v < 0 else ZERO


def pos_part(x: Sequence) -> Sequence:
    """``x+ = max(x, 0)`` entrywise."""
    if isinstance(x, Catalog):
        if x.coef > 0:
            return catalog(x.coef, x.a, x.b, tuple((i, _pos(v)) for i, v in x.patch))
        return Finite(tuple((i, _pos(v)) for i, v in x.patch))
    return map_values(x, _pos)


def neg_part(x: Sequence) -> Sequence:
    """``x- = max(-x, 0)`` entrywise, so that ``x = x+ - x-``."""
    return pos_part(negate(x))


# -- refinements ----------------------------------------------------------

def blocks_of(x: Sequence) -> Blocks:
    if isinstance(x, Blocks):
        return x
    if isinstance(x, Finite):
        out, pos = [], 0
        for i, v in x.entries:
            if i - 1 > pos:
                out.append((ZERO, i - 1 - pos))
            out.append((v, 1))
            pos = i
        return Blocks(tuple(out), ZERO)
    if isinstance(x, Periodic) and len(x.pattern) == 1:
        return Blocks(tuple((v, 1) for v in x.prefix_values), x.pattern[0])
    raise UnsupportedCombination(f"{x.kind} sequence has no block description")


def periodic_of(x: Sequence) -> Periodic:
    if isinstance(x, Periodic):
        return x
    if isinstance(x, Finite):
        return Periodic((ZERO,), tuple(x.prefix(x.regular_from() - 1)))
    if isinstance(x, Blocks):
        if x.total > EXPAND_LIMIT:
            raise UnsupportedCombination("block counts too large to expand into a periodic prefix")
        return Periodic((x.tail,), tuple(x.prefix(x.total)))
    raise UnsupportedCombination(f"{x.kind} sequence is not eventually periodic")


def finite_of(x: Sequence) -> Finite:
    if isinstance(x, Finite):
        return x
    if isinstance(x, Blocks) and x.tail == 0 and x.total <= EXPAND_LIMIT:
        return Finite.from_list(x.prefix(x.total))
    if isinstance(x, Periodic) and x.pattern == (ZERO,):
        return Finite.from_list(x.prefix_values)
    raise UnsupportedCombination(f"{x.kind} sequence is not finitely supported in expandable form")


def combine_blocks(x: Blocks, y: Blocks, f) -> Blocks:
    """Entrywise ``f(x_n, y_n)`` over the union of both block boundaries."""
    out = []
    xi = yi = 0
    xrem = x.blocks[0][1] if x.blocks else None
    yrem = y.blocks[0][1] if y.blocks else None
    while xi < len(x.blocks) or yi < len(y.blocks):
        xv = x.blocks[xi][0] if xi < len(x.blocks) else x.tail
        yv = y.blocks[yi][0] if yi < len(y.blocks) else y.tail
        if xrem is None:
            step = yrem
        elif yrem is None:
            step = xrem
        else:
            step = min(xrem, yrem)
        out.append((f(xv, yv), step))
        if xrem is not None:
            xrem -= step
            if xrem == 0:
                xi += 1
                xrem = x.blocks[xi][1] if xi < len(x.blocks) else None
        if yrem is not None:
            yrem -= step
            if yrem == 0:
                yi += 1
                yrem = y.blocks[yi][1] if yi < len(y.blocks) else None
    return Blocks(tuple(out), f(x.tail, y.tail))


def combine_periodic(x: Periodic, y: Periodic, f) -> Periodic:
    p = max(len(x.prefix_values), len(y.prefix_values))
    L = math.lcm(x.period, y.period)
    vals = [f(x.term(n), y.term(n)) for n in range(1, p + L + 1)]
    return Periodic(tuple(vals[p:]), tuple(vals[:p]))


def _combine_catalog(x: Catalog, y: Sequence, f, linear: bool) -> Sequence:
    """Catalog with Finite, or Catalog with Catalog on the same ``(a, b)`` grid."""
    if isinstance(y, Finite):
        idx = {i for i, _ in x.patch} | {i for i, _ in y.entries}
        patch = tuple((i, f(x.term(i), y.term(i))) for i in sorted(idx))
        return catalog(f(x.coef, ZERO), x.a, x.b, patch)
    if isinstance(y, Catalog) and linear and (x.a, x.b) == (y.a, y.b):
        idx = {i for i, _ in x.patch} | {i for i, _ in y.patch}
        patch = tuple((i, f(x.term(i), y.term(i))) for i in sorted(idx))
        coef = f(x.coef, y.coef)
        if coef == 0:
            return Finite(patch)
        return catalog(coef, x.a, x.b, patch)
    raise UnsupportedCombination(f"cannot combine catalog with {y.kind}")


def _binary(x: Sequence, y: Sequence, f, linear: bool) -> Sequence:
    if isinstance(x, Finite) and isinstance(y, Finite):
        idx = {i for i, _ in x.entries} | {i for i, _ in y.entries}
        return Finite(tuple((i, f(x.term(i), y.term(i))) for i in sorted(idx)))
    if isinstance(x, Catalog) or isinstance(y, Catalog):
        if isinstance(y, Catalog) and not isinstance(x, Catalog):
            x, y, f = y, x, (lambda g: (lambda a, b: g(b, a)))(f)
        if isinstance(y, Blocks) and y.tail == 0 and y.total <= EXPAND_LIMIT:
            y = finite_of(y)
        return _combine_catalog(x, y, f, linear)
    if isinstance(x, Periodic) or isinstance(y, Periodic):
        return combine_periodic(periodic_of(x), periodic_of(y), f)
    return combine_blocks(blocks_of(x), blocks_of(y), f)


def add(x: Sequence, y: Sequence) -> Sequence:
    return _binary(x, y, lambda a, b: a + b, linear=True)


def subtract(x: Sequence, y: Sequence) -> Sequence:
    return _binary(x, y, lambda a, b: a - b, linear=True)


def multiply(x: Sequence, y: Sequence) -> Sequence:
    """Entrywise product; only for pairs with an obvious common refinement."""
    if isinstance(x, Finite) or isinstance(y, Finite):
        fin, other = (x, y) if isinstance(x, Finite) else (y, x)
        return Finite(tuple((i, v * other.term(i)) for i, v in fin.entries))
    if isinstance(x, Catalog) or isinstance(y, Catalog):
        cat, other = (x, y) if isinstance(x, Catalog) else (y, x)
        if isinstance(other, Blocks) and other.total <= EXPAND_LIMIT:
            c = other.tail
            head = max(other.total, cat.patch_max)
            patch = tuple((i, cat.term(i) * other.term(i)) for i in range(1, head + 1))
            if c == 0:
                return Finite(patch)
            return catalog(cat.coef * c, cat.a, cat.b, patch)
        raise UnsupportedCombination(f"cannot multiply catalog with {other.kind}")
    if isinstance(x, Periodic) or isinstance(y, Periodic):
        return combine_periodic(periodic_of(x), periodic_of(y), lambda a, b: a * b)
    return combine_blocks(blocks_of(x), blocks_of(y), lambda a, b: a * b)


_UNARY = {
    "abs": absolute,
    "negate": negate,
    "pos_part": pos_part,
    "neg_part": neg_part,
}


def pointwise_algebra(op: str, x: Sequence, y: Sequence | None = None, lam=None) -> Sequence:
    """Dispatch by name: abs, negate, add, scale, pos_part, neg_part."""
    if op in _UNARY:
        return _UNARY[op](x)
    if op == "scale":
        if lam is None:
            raise ValueError("scale needs a factor")
        return scale(lam, x)
    if op == "add":
        if y is None:
            raise ValueError("add needs two operands")
        return add(x, y)
    raise ValueError(f"unknown pointwise operation {op!r}")
