"""Bit-mask subsets of a ground set ``{0, ..., n-1}``.

Masks are plain Python ints, so the width is unbounded; the algorithms
themselves are exponential and only meant for desk-scale ``n``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator


def to_mask(s) -> int:
    if isinstance(s, int):
        return s
    m = 0
    for e in s:
        m |= 1 << e
    return m


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def to_set(mask: int) -> frozenset[int]:
    return frozenset(members(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full(n: int) -> int:
    return (1 << n) - 1


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask``."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_of_size(elements: Iterable[int], k: int) -> Iterator[int]:
    """Masks of the ``k``-subsets of ``elements`` in lexicographic order."""
    els = sorted(elements)
    for combo in combinations(els, k):
        m = 0
        for e in combo:
            m |= 1 << e
        yield m


def lex_key(mask: int) -> tuple[int, ...]:
    return members(mask)
