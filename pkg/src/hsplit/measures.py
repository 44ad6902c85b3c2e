"""Citation counts of (merged) articles and the h-index of a partition.

``sum`` adds the in-degrees of the atomic articles, ``union`` counts distinct
citing articles, and ``fusion`` counts distinct citing articles outside the
owned set plus one citation per *other part* of the partition that cites the
part at all. Self-citations inside a part therefore never count under
``fusion``. The first fusion term uses citers outside the owned set ``W``;
a shorter rendering of the same definition writes "outside ``P``", which would
count an owned citer twice (individually and through its part).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graph import CitationGraph, InstanceError, Measure, Profile, Refinement


def h_index_from_counts(counts: Iterable[int]) -> int:
    ordered = sorted(counts, reverse=True)
    h = 0
    for i, c in enumerate(ordered, 1):
        if c >= i:
            h = i
        else:
            break
    return h


def external_citers(graph: CitationGraph, owned: Iterable[str], article: str) -> frozenset[str]:
    """Articles outside ``owned`` citing ``article``."""
    owned = set(owned)
    return frozenset(u for u in graph.citing(article) if u not in owned)


# -- index level; used by the solvers -----------------------------------------

def sum_cites(graph: CitationGraph, part: Iterable[int]) -> int:
    citers = graph.citers
    return sum(len(citers[v]) for v in part)


def union_cites(graph: CitationGraph, part: Iterable[int]) -> int:
    citers = graph.citers
    seen = set()
    for v in part:
        seen.update(citers[v])
    return len(seen)


def local_cites(graph: CitationGraph, part: Iterable[int], measure: Measure) -> int:
    """sum/union value of an index-level part (these ignore the rest of the partition)."""
    if measure is Measure.SUM:
        return sum_cites(graph, part)
    if measure is Measure.UNION:
        return union_cites(graph, part)
    raise ValueError("fusion citations depend on the whole partition")


def fusion_counts(graph: CitationGraph, parts: Sequence[Sequence[int]]) -> list[int]:
    """Fusion citations of every part of an index-level partition, in O(n + m)."""
    part_of = {}
    for i, p in enumerate(parts):
        for v in p:
            part_of[v] = i
    citers = graph.citers
    out = []
    for i, p in enumerate(parts):
        outside = set()
        citing_parts = set()
        for v in p:
            for u in citers[v]:
                q = part_of.get(u)
                if q is None:
                    outside.add(u)
                elif q != i:
                    citing_parts.add(q)
        out.append(len(outside) + len(citing_parts))
    return out


def counts_of(graph: CitationGraph, parts: Sequence[Sequence[int]], measure: Measure) -> list[int]:
    if measure is Measure.FUSION:
        return fusion_counts(graph, parts)
    return [local_cites(graph, p, measure) for p in parts]


def hindex_of(graph: CitationGraph, parts: Sequence[Sequence[int]], measure: Measure) -> int:
    return h_index_from_counts(counts_of(graph, parts, measure))


def to_index(graph: CitationGraph, parts: Iterable[Iterable[str]]) -> list[list[int]]:
    idx = graph.index
    return [sorted(idx[a] for a in p) for p in parts]


def to_ids(graph: CitationGraph, parts: Iterable[Iterable[int]]) -> list[frozenset[str]]:
    names = graph.articles
    return [frozenset(names[v] for v in p) for p in parts]


# -- public, id level -----------------------------------------------------------

def _as_parts(partition) -> Sequence[frozenset[str]]:
    if isinstance(partition, (Profile, Refinement)):
        return partition.partition
    return [frozenset(p) for p in partition]


def citations(graph: CitationGraph, partition, part: Iterable[str], measure: Measure | str) -> int:
    """Citations of ``part`` under ``measure``.

    ``partition`` (a Profile, Refinement, or iterable of parts) is only
    consulted for fusion, where ``part`` must be one of its parts; pass None
    for sum and union.
    """
    measure = Measure(measure)
    part = frozenset(part)
    if measure is not Measure.FUSION:
        return local_cites(graph, [graph.index[a] for a in part], measure)
    if partition is None:
        raise InstanceError("fusion citations need the surrounding partition")
    parts = list(_as_parts(partition))
    try:
        i = parts.index(part)
    except ValueError:
        raise InstanceError(f"{sorted(part)} is not a part of the partition") from None
    return fusion_counts(graph, to_index(graph, parts))[i]


def part_citations(graph: CitationGraph, partition, measure: Measure | str) -> list[int]:
    """Citations of every part, in the partition's order."""
    return counts_of(graph, to_index(graph, _as_parts(partition)), Measure(measure))


def h_index(graph: CitationGraph, partition, measure: Measure | str) -> int:
    """Largest h such that at least h parts have at least h citations."""
    return h_index_from_counts(part_citations(graph, partition, measure))
