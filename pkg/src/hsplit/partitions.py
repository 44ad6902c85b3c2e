"""Enumeration and counting of set partitions of small sets."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence


def set_partitions(items: Sequence, max_blocks: int | None = None) -> Iterator[list[list]]:
    """Yield every partition of ``items`` (restricted growth strings), each once.

    With ``max_blocks`` only partitions into at most that many blocks are produced.
    """
    items = list(items)
    n = len(items)
    if max_blocks is None:
        max_blocks = n
    if n == 0:
        yield []
        return
    if max_blocks < 1:
        return
    blocks: list[list] = []

    def rec(i: int):
        if i == n:
            yield [list(b) for b in blocks]
            return
        x = items[i]
        for b in blocks:
            b.append(x)
            yield from rec(i + 1)
            b.pop()
        if len(blocks) < max_blocks:
            blocks.append([x])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def extraction_partitions(items: Sequence, max_extractions: int | None = None) -> Iterator[tuple[list[list], int]]:
    """Partitions reachable by extracting single articles, with their extraction count.

    Such a partition is one remainder block plus singletons. Extracting all but
    one article and extracting all of them give the same partition; it is
    reported once, with ``len(items) - 1`` extractions.
    """
    items = list(items)
    n = len(items)
    if n == 0:
        yield [], 0
        return
    if max_extractions is None:
        max_extractions = n
    for size in range(n, 1, -1):
        e = n - size
        if e > max_extractions:
            return
        for keep in combinations(range(n), size):
            kept = set(keep)
            yield [[items[i] for i in keep]] + [[items[i]] for i in range(n) if i not in kept], e
    if n - 1 <= max_extractions:
        yield [[x] for x in items], n - 1


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


def extraction_count(n: int, extractions: int) -> int:
    """Number of distinct partitions of an n-set using exactly ``extractions`` extractions."""
    from math import comb
    if n == 0:
        return 1 if extractions == 0 else 0
    if extractions < n - 1:
        return comb(n, extractions)
    return 1 if extractions == n - 1 else 0
