"""Pairing functions, vector codes and namespace tagging shared by all modules.

The 2-ary pairing is the Cantor polynomial, whose inverse is exact integer
arithmetic (``math.isqrt``), so everything here works on arbitrarily large
naturals.
"""

from __future__ import annotations

import math
from typing import Sequence

# Namespace tags keeping program indices and formula codes in disjoint ranges.
TAG_PROGRAM = 0
TAG_FORMULA = 1


def pair2(x: int, y: int) -> int:
    """Cantor pairing (x+y)(x+y+1)/2 + y, a bijection N^2 -> N."""
    if x < 0 or y < 0:
        raise ValueError("pair2 is defined on naturals only")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    """Inverse of pair2: unpair(pair2(x, y)) == (x, y)."""
    if z < 0:
        raise ValueError("unpair is defined on naturals only")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = z - t
    x = w - y
    return x, y


def unpair_k(z: int) -> int:
    """First projection K with K(pair2(x, y)) == x."""
    return unpair(z)[0]


def unpair_l(z: int) -> int:
    """Second projection L with L(pair2(x, y)) == y."""
    return unpair(z)[1]


def pair_n(xs: Sequence[int]) -> int:
    """Left-nested n-ary pairing: pair_n([a, b]) = pair2(a, b) and
    pair_n(xs + [y]) = pair2(pair_n(xs), y)."""
    if len(xs) < 2:
        raise ValueError("pair_n needs at least two components")
    acc = pair2(xs[0], xs[1])
    for x in xs[2:]:
        acc = pair2(acc, x)
    return acc


def unpair_n(z: int, n: int) -> tuple[int, ...]:
    """Inverse of pair_n for a known component count n >= 2."""
    if n < 2:
        raise ValueError("unpair_n needs n >= 2")
    parts: list[int] = []
    acc = z
    for _ in range(n - 1):
        acc, last = unpair(acc)
        parts.append(last)
    parts.append(acc)
    return tuple(reversed(parts))


def diag(x: int, n: int) -> tuple[int, ...]:
    """The diagonal vector (x, ..., x) of length n."""
    if n < 1:
        raise ValueError("diag needs n >= 1")
    return (x,) * n


def diag_point(h: int, xs: Sequence[int]) -> tuple[int, ...]:
    """Diagonal of the (len(xs)+1)-ary code of (h, xs): the canonical point
    used by the doubly-universal pair constructions."""
    return diag(pair_n((h, *xs)), len(xs))


def tag_code(tag: int, raw: int) -> int:
    """Embed a raw code into the namespace ``tag``."""
    return pair2(tag, raw)


def untag_code(code: int) -> tuple[int, int]:
    """Split a tagged code into (tag, raw)."""
    return unpair(code)
