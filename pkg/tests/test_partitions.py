from itertools import combinations

import pytest
from sympy.functions.combinatorial.numbers import bell as sym_bell, stirling as sym_stirling

from hsplit.partitions import (bell, extraction_count, extraction_partitions, set_partitions,
                               stirling2)


def canon(blocks):
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@pytest.mark.parametrize("n", range(9))
def test_bell_counts(n):
    got = [canon(p) for p in set_partitions(range(n))]
    assert len(got) == len(set(got)) == int(sym_bell(n)) == bell(n)
    for p in got:
        assert sorted(x for b in p for x in b) == list(range(n))


@pytest.mark.parametrize("n", range(1, 8))
def test_block_limit(n):
    for b in range(1, n + 1):
        got = list(set_partitions(range(n), max_blocks=b))
        assert all(len(p) <= b for p in got)
        assert len(got) == sum(int(sym_stirling(n, j)) for j in range(1, b + 1))
        assert stirling2(n, b) == int(sym_stirling(n, b))


def test_three_items_extract_five_ways():
    got = {canon(p) for p, _ in extraction_partitions("abc")}
    assert got == {
        (("a", "b", "c"),),
        (("a", "b"), ("c",)), (("a", "c"), ("b",)), (("a",), ("b", "c")),
        (("a",), ("b",), ("c",)),
    }


def brute_extractions(items):
    """Keep a subset as the remainder, make the rest singletons, deduplicate."""
    seen = set()
    for size in range(len(items) + 1):
        for extracted in combinations(items, size):
            rest = [x for x in items if x not in extracted]
            blocks = [[x] for x in extracted] + ([rest] if rest else [])
            seen.add(canon(blocks))
    return seen


@pytest.mark.parametrize("n", range(7))
def test_extractions_against_brute_force(n):
    items = list(range(n))
    got = [canon(p) for p, _ in extraction_partitions(items)]
    assert len(got) == len(set(got))
    assert set(got) == brute_extractions(items)
    assert len(got) == sum(extraction_count(n, e) for e in range(max(n, 1)))


def test_extraction_cost_and_limit():
    for blocks, e in extraction_partitions(range(5)):
        assert e == len(blocks) - 1
    assert all(e <= 2 for _, e in extraction_partitions(range(5), max_extractions=2))
    assert sum(1 for _ in extraction_partitions(range(5), max_extractions=2)) == 1 + 5 + 10
