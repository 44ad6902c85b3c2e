"""Exhaustive reference solver for every operation, variant and measure.

Nothing here is clever: the oracle lists every refinement the problem
allows and evaluates the h-index of each. The only pruning is by the budget
constraint itself, which removes infeasible refinements and nothing else.
"""

from __future__ import annotations

from math import prod
from typing import Iterator, Sequence

from .graph import (CitationGraph, Measure, Operation, ProblemInstance, Profile, Refinement,
                    Variant)
from .measures import fusion_counts, h_index_from_counts, local_cites
from .partitions import (bell, extraction_count, extraction_partitions, set_partitions,
                         stirling2)
from .result import DEFAULT_LIMITS, BoundExceeded, Limits, SolveResult

_Blocks = list  # list[list[int]] or list[list[str]]


def _normalize(operation, variant) -> tuple[Operation, Variant]:
    operation, variant = Operation(operation), Variant(variant)
    if operation is Operation.ATOMIZING and variant is Variant.CAUTIOUS:
        variant = Variant.CONSERVATIVE
    return operation, variant


def _part_options(part: Sequence, operation: Operation, max_ops: int | None):
    """(blocks, changed, ops) for every way the problem may split one part."""
    n = len(part)
    if operation is Operation.ATOMIZING:
        yield [list(part)], False, 0
        if n > 1:
            yield [[x] for x in part], True, 1
    elif operation is Operation.EXTRACTING:
        for blocks, e in extraction_partitions(part, max_ops):
            yield blocks, e > 0, e
    else:
        max_blocks = None if max_ops is None else max_ops + 1
        for blocks in set_partitions(part, max_blocks):
            yield blocks, len(blocks) > 1, len(blocks) - 1


def _count_by_cost(n: int, operation: Operation, variant: Variant, k: int | None) -> list[int]:
    """Option counts of one part indexed by their budget cost."""
    if variant is Variant.PLAIN:
        if operation is Operation.ATOMIZING:
            return [2 if n > 1 else 1]
        if operation is Operation.EXTRACTING:
            return [sum(extraction_count(n, e) for e in range(n))]
        return [bell(n)]
    if variant is Variant.CONSERVATIVE:
        if operation is Operation.ATOMIZING:
            total = 2 if n > 1 else 1
        elif operation is Operation.EXTRACTING:
            total = sum(extraction_count(n, e) for e in range(n))
        else:
            total = bell(n)
        return [1, total - 1]
    if operation is Operation.EXTRACTING:
        return [extraction_count(n, e) for e in range(max(n, 1))]
    return [stirling2(n, b + 1) for b in range(max(n, 1))]


def count_refinements(profile: Profile, operation, variant, k: int | None = None) -> int:
    """Exact number of refinements ``enumerate_refinements`` yields."""
    operation, variant = _normalize(operation, variant)
    sizes = [len(p) for p in profile.partition]
    if variant is Variant.PLAIN:
        return prod(_count_by_cost(s, operation, variant, None)[0] for s in sizes)
    dist = [1] + [0] * k
    for s in sizes:
        per = _count_by_cost(s, operation, variant, k)
        new = [0] * (k + 1)
        for used, ways in enumerate(dist):
            if ways:
                for cost, c in enumerate(per):
                    if used + cost > k:
                        break
                    new[used + cost] += ways * c
        dist = new
    return sum(dist)


def _enumerate(parts: Sequence[Sequence], operation: Operation, variant: Variant,
               k: int | None) -> Iterator[_Blocks]:
    max_ops = k if variant is Variant.CAUTIOUS else None
    options = []
    for p in parts:
        opts = []
        for blocks, changed, ops in _part_options(p, operation, max_ops):
            cost = {Variant.PLAIN: 0, Variant.CONSERVATIVE: int(changed),
                    Variant.CAUTIOUS: ops}[variant]
            opts.append((cost, blocks))
        options.append(opts)
    budget0 = k if variant is not Variant.PLAIN else 0

    chosen: list[list] = []

    def rec(i: int, budget: int):
        if i == len(options):
            yield [b for blocks in chosen for b in blocks]
            return
        for cost, blocks in options[i]:
            if cost > budget:
                continue
            chosen.append(blocks)
            yield from rec(i + 1, budget - cost)
            chosen.pop()

    yield from rec(0, budget0)


def _check_bound(profile: Profile, operation, variant, k, limits: Limits) -> None:
    total = count_refinements(profile, operation, variant, k)
    if total > limits.oracle_refinements:
        raise BoundExceeded("oracle refinements", total, limits.oracle_refinements)


def enumerate_refinements(profile: Profile, operation, variant=Variant.PLAIN, k: int | None = None,
                          *, graph: CitationGraph | None = None,
                          limits: Limits = DEFAULT_LIMITS) -> Iterator[Refinement]:
    """Every refinement allowed by (operation, variant, k), each exactly once."""
    operation, variant = _normalize(operation, variant)
    if variant is not Variant.PLAIN and k is None:
        raise ValueError(f"variant {variant.value} requires k")
    _check_bound(profile, operation, variant, k, limits)
    parts = [sorted(p, key=graph.index.__getitem__) if graph else sorted(p) for p in profile.partition]
    for blocks in _enumerate(parts, operation, variant, k):
        yield Refinement.of(profile, blocks, graph)


def oracle_solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Maximum h-index over all allowed refinements, with the canonically smallest optimum."""
    g = instance.graph
    profile = instance.profile
    operation, variant, k = instance.operation, instance.variant, instance.k
    _check_bound(profile, operation, variant, k, limits)
    parts = [sorted(g.index[a] for a in p) for p in profile.partition]
    measure = instance.measure
    cache: dict[tuple, int] = {}

    best_h = -1
    best_key = None
    for blocks in _enumerate(parts, operation, variant, k):
        if measure is Measure.FUSION:
            counts = fusion_counts(g, blocks)
        else:
            counts = []
            for b in blocks:
                key = tuple(b)
                c = cache.get(key)
                if c is None:
                    c = cache[key] = local_cites(g, b, measure)
                counts.append(c)
        h = h_index_from_counts(counts)
        if h < best_h:
            continue
        key = tuple(sorted(tuple(b) for b in blocks))
        if h > best_h or key < best_key:
            best_h, best_key = h, key

    names = g.articles
    witness = Refinement.of(profile, [[names[v] for v in b] for b in best_key], g)
    feasible = best_h >= instance.h
    return SolveResult(
        feasible=feasible,
        refinement=witness if feasible else None,
        achieved_h=best_h,
        operations_used=witness.operations(profile, operation) if feasible else 0,
        parts_changed=witness.parts_changed(profile) if feasible else 0,
        solver="oracle",
    )
