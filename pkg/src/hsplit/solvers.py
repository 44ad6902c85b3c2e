"""Exact solvers for the tractable splitting problems.

Every solver answers the decision question for the instance's target ``h``
and additionally reports the largest reachable h-index. Reachability of an
h-index is monotone in h, and each decision procedure is exact, so the maximum
is found by binary search over decisions; the returned witness is the
decision procedure's refinement at that maximum.

sum/union: atomizing and extracting (all variants) in linear time per
decision; conservative and plain dividing with an exact per-part gain.
fusion: plain atomizing via the FPT procedure. Everything else goes to the
oracle through :func:`solve`.
"""

from __future__ import annotations

from math import isqrt
from typing import Callable, Sequence

from .graph import (CitationGraph, Measure, Operation, ProblemInstance, Refinement, Variant)
from .measures import fusion_counts, h_index_from_counts, local_cites, to_ids
from .partitions import set_partitions
from .result import DEFAULT_LIMITS, BoundExceeded, Limits, SolveResult

Blocks = list  # list[list[int]]


def _require(instance: ProblemInstance, operation: Operation, variants, measures) -> None:
    if instance.operation is not operation:
        raise ValueError(f"expected a {operation.value} instance, got {instance.operation.value}")
    if instance.variant not in variants:
        raise ValueError(f"variant {instance.variant.value} not handled here")
    if instance.measure not in measures:
        raise ValueError(f"measure {instance.measure.value} not handled here")


_LOCAL = (Measure.SUM, Measure.UNION)


def _index_parts(instance: ProblemInstance) -> list[list[int]]:
    idx = instance.graph.index
    return [sorted(idx[a] for a in p) for p in instance.profile.partition]


def _maximize(decide: Callable[[int], tuple[Blocks, int]], target: int, upper: int,
              parts: Blocks) -> tuple[int, Blocks]:
    """Largest h whose decision succeeds, and the decision's refinement there.

    ``decide(h)`` returns (refinement, number of its parts with >= h citations).
    """
    cache: dict[int, tuple[Blocks, int]] = {}

    def ok(h: int) -> bool:
        if h not in cache:
            cache[h] = decide(h)
        return cache[h][1] >= h

    lo, hi = 0, upper
    if 0 < target <= upper:
        if ok(target):
            lo = target
        else:
            hi = target - 1
    elif target > upper:
        hi = upper
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid - 1
    if lo == 0:
        return 0, [list(p) for p in parts]
    ok(lo)
    return lo, cache[lo][0]


def _upper(instance: ProblemInstance) -> int:
    """No refinement beats this: h parts with h citations each need h*h arcs into W."""
    g = instance.graph
    into = sum(len(g.citers[g.index[a]]) for a in instance.profile.owned)
    return min(len(instance.profile.owned), isqrt(into))


def _result(instance: ProblemInstance, best: int, blocks: Blocks, solver: str) -> SolveResult:
    if best < instance.h:
        return SolveResult(False, None, best, solver=solver)
    r = Refinement.of(instance.profile, to_ids(instance.graph, blocks), instance.graph)
    return SolveResult(True, r, best, r.operations(instance.profile, instance.operation),
                       r.parts_changed(instance.profile), solver)


def _top_gains(gains: Sequence[int], k: int | None) -> list[int]:
    """Indices of the (at most) k largest positive gains; ties by position.

    Counting sort, as gains are bounded by part sizes.
    """
    top = max(gains, default=0)
    if top <= 0:
        return []
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for i, g in enumerate(gains):
        if g > 0:
            buckets[g].append(i)
    chosen = []
    for g in range(top, 0, -1):
        for i in buckets[g]:
            if k is not None and len(chosen) >= k:
                return chosen
            chosen.append(i)
    return chosen


# -- atomizing, sum/union ----------------------------------------------------------

def _atomize_stats(g: CitationGraph, parts: Blocks, measure: Measure):
    # a singleton's sum and union both equal its in-degree (arcs are unique)
    single = [[len(g.citers[v]) for v in p] for p in parts]
    whole = [local_cites(g, p, measure) for p in parts]
    return single, whole


def atomize_refinement(g: CitationGraph, parts: Blocks, h: int, measure: Measure) -> tuple[Blocks, int]:
    """Atomize every merged article that has an atomic article with >= h citations."""
    single, whole = _atomize_stats(g, parts, measure)
    return _atomize_plain(parts, single, whole, h)


def _atomize_plain(parts, single, whole, h):
    out, good = [], 0
    for p, sv, w in zip(parts, single, whole):
        hits = sum(1 for c in sv if c >= h)
        if len(p) > 1 and hits:
            out.extend([v] for v in p)
            good += hits
        else:
            out.append(p)
            good += w >= h
    return out, good


def atomize_conservative_refinement(g: CitationGraph, parts: Blocks, h: int, k: int,
                                    measure: Measure) -> tuple[Blocks, int]:
    single, whole = _atomize_stats(g, parts, measure)
    return _atomize_budget(parts, single, whole, h, k)


def _atomize_budget(parts, single, whole, h, k):
    gains = [sum(1 for c in sv if c >= h) - (w >= h) for sv, w in zip(single, whole)]
    chosen = set(_top_gains(gains, k))
    good = sum(w >= h for w in whole) + sum(gains[i] for i in chosen)
    out = []
    for i, p in enumerate(parts):
        if i in chosen:
            out.extend([v] for v in p)
        else:
            out.append(p)
    return out, good


def atomize_solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Atomizing with sum or union citations, linear time per decision."""
    _require(instance, Operation.ATOMIZING, (Variant.PLAIN,), _LOCAL)
    g, parts = instance.graph, _index_parts(instance)
    single, whole = _atomize_stats(g, parts, instance.measure)
    best, blocks = _maximize(lambda h: _atomize_plain(parts, single, whole, h),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "atomize")


def atomize_conservative_solve(instance: ProblemInstance, k: int | None = None,
                               limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Atomize the (at most) k merged articles that gain the most parts with >= h citations."""
    _require(instance, Operation.ATOMIZING, (Variant.CONSERVATIVE,), _LOCAL)
    k = instance.k if k is None else k
    g, parts = instance.graph, _index_parts(instance)
    single, whole = _atomize_stats(g, parts, instance.measure)
    best, blocks = _maximize(lambda h: _atomize_budget(parts, single, whole, h, k),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "atomize-conservative")


# -- extracting, sum/union -----------------------------------------------------------

class _Extractor:
    """Runs the per-part extraction loop in time linear in the part's in-arcs.

    For union citations, ``cnt[w]`` holds how many articles of the current
    remainder are cited by ``w``, so the remainder's value after removing ``v``
    is read off in O(deg(v)).
    """

    def __init__(self, g: CitationGraph, measure: Measure):
        self.g = g
        self.union = measure is Measure.UNION
        self.cnt = [0] * g.n if self.union else None

    def scan(self, part: list[int], h: int, limit: int | None, guard: bool):
        """Extract atomic articles with >= h citations, at most ``limit`` of them.

        With ``guard`` an article is only extracted if the remainder keeps
        >= h citations. Returns (extracted, remainder, remainder value).
        """
        citers = self.g.citers
        if self.union:
            cnt = self.cnt
            value = 0
            for v in part:
                for w in citers[v]:
                    if cnt[w] == 0:
                        value += 1
                    cnt[w] += 1
        else:
            value = sum(len(citers[v]) for v in part)
        extracted, remainder = [], []
        left = len(part)
        for v in part:
            cv = citers[v]
            if (limit is None or len(extracted) < limit) and len(cv) >= h and left > 1:
                if self.union:
                    after = value - sum(1 for w in cv if cnt[w] == 1)
                else:
                    after = value - len(cv)
                if not guard or after >= h:
                    extracted.append(v)
                    left -= 1
                    value = after
                    if self.union:
                        for w in cv:
                            cnt[w] -= 1
                    continue
            remainder.append(v)
        if self.union:
            for v in remainder:
                for w in citers[v]:
                    cnt[w] = 0
        return extracted, remainder, value


def _emit(out: Blocks, extracted, remainder) -> None:
    out.extend([v] for v in extracted)
    if remainder:
        out.append(remainder)


def extract_refinement(g: CitationGraph, parts: Blocks, h: int, measure: Measure) -> tuple[Blocks, int]:
    """Extract every atomic article that alone has >= h citations."""
    ex = _Extractor(g, measure)
    out, good = [], 0
    for p in parts:
        extracted, remainder, value = ex.scan(p, h, None, guard=False)
        _emit(out, extracted, remainder)
        good += len(extracted) + (bool(remainder) and value >= h)
    return out, good


def extract_cautious_refinement(g: CitationGraph, parts: Blocks, h: int, k: int,
                                measure: Measure) -> tuple[Blocks, int]:
    """Up to k extractions, each keeping both the article and the remainder at >= h."""
    ex = _Extractor(g, measure)
    out, good = [], 0
    budget = k
    for p in parts:
        extracted, remainder, value = ex.scan(p, h, budget, guard=True)
        budget -= len(extracted)
        _emit(out, extracted, remainder)
        good += len(extracted) + (value >= h)
    return out, good


def extract_conservative_refinement(g: CitationGraph, parts: Blocks, h: int, k: int,
                                    measure: Measure) -> tuple[Blocks, int]:
    """Guarded extractions inside the k merged articles that gain the most."""
    ex = _Extractor(g, measure)
    plans = []
    gains = []
    good = 0
    for p in parts:
        extracted, remainder, value = ex.scan(p, h, None, guard=True)
        plans.append((extracted, remainder))
        gains.append(len(extracted))
        # a guarded extraction only happens while the remainder stays >= h
        good += value >= h
    chosen = set(_top_gains(gains, k))
    out = []
    for i, p in enumerate(parts):
        if i in chosen:
            _emit(out, *plans[i])
            good += gains[i]
        else:
            out.append(p)
    return out, good


def extract_solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    _require(instance, Operation.EXTRACTING, (Variant.PLAIN,), _LOCAL)
    g, parts, mu = instance.graph, _index_parts(instance), instance.measure
    best, blocks = _maximize(lambda h: extract_refinement(g, parts, h, mu),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "extract")


def extract_cautious_solve(instance: ProblemInstance, k: int | None = None,
                           limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    _require(instance, Operation.EXTRACTING, (Variant.CAUTIOUS,), _LOCAL)
    k = instance.k if k is None else k
    g, parts, mu = instance.graph, _index_parts(instance), instance.measure
    best, blocks = _maximize(lambda h: extract_cautious_refinement(g, parts, h, k, mu),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "extract-cautious")


def extract_conservative_solve(instance: ProblemInstance, k: int | None = None,
                               limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    _require(instance, Operation.EXTRACTING, (Variant.CONSERVATIVE,), _LOCAL)
    k = instance.k if k is None else k
    g, parts, mu = instance.graph, _index_parts(instance), instance.measure
    best, blocks = _maximize(lambda h: extract_conservative_refinement(g, parts, h, k, mu),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "extract-conservative")


# -- dividing, sum/union -------------------------------------------------------------

class _SubsetTable:
    """sum/union values of every subset of one small part, as bitmasks over the part."""

    def __init__(self, g: CitationGraph, part: Sequence[int], measure: Measure):
        self.part = list(part)
        s = len(self.part)
        local: dict[int, int] = {}
        bits = []
        for v in self.part:
            b = 0
            for w in g.citers[v]:
                b |= 1 << local.setdefault(w, len(local))
            bits.append(b)
        size = 1 << s
        value = [0] * size
        if measure is Measure.SUM:
            deg = [len(g.citers[v]) for v in self.part]
            for mask in range(1, size):
                low = (mask & -mask).bit_length() - 1
                value[mask] = value[mask & (mask - 1)] + deg[low]
        else:
            union = [0] * size
            for mask in range(1, size):
                low = (mask & -mask).bit_length() - 1
                union[mask] = union[mask & (mask - 1)] | bits[low]
                value[mask] = union[mask].bit_count()
        self.value = value
        self._solved: dict[int, tuple[int, list[list[int]]]] = {}

    def best(self, h: int) -> tuple[int, list[list[int]]]:
        """Most blocks with >= h citations in any partition of the part, and one such partition."""
        if h in self._solved:
            return self._solved[h]
        s = len(self.part)
        full = (1 << s) - 1
        value = self.value
        f = [0] * (full + 1)
        choice = [0] * (full + 1)
        for mask in range(1, full + 1):
            low = mask & -mask
            rest = mask ^ low
            best, pick = -1, 0
            sub = rest
            while True:
                blk = sub | low
                cand = (value[blk] >= h) + f[mask ^ blk]
                if cand > best:
                    best, pick = cand, blk
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            f[mask] = best
            choice[mask] = pick
        blocks = []
        mask = full
        while mask:
            blk = choice[mask]
            blocks.append([self.part[i] for i in range(s) if blk >> i & 1])
            mask ^= blk
        self._solved[h] = (f[full], blocks)
        return self._solved[h]


def _table(g, part, measure, limits: Limits) -> _SubsetTable:
    if len(part) > limits.partition_elements:
        raise BoundExceeded("set-partition search", len(part), limits.partition_elements)
    return _SubsetTable(g, part, measure)


def division_gain(g: CitationGraph, part: Sequence[int], h: int, measure: Measure,
                  limits: Limits = DEFAULT_LIMITS) -> int:
    """Most parts with >= h citations obtainable by partitioning ``part`` (index level)."""
    if local_cites(g, part, measure) < h:
        return 0
    return _table(g, part, measure, limits).best(h)[0]


def merge_subroutine(graph: CitationGraph, articles, h: int, measure: Measure | str,
                     limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether some partition of ``articles`` has h-index >= h.

    Exact and exhaustive; stands in for a dedicated h-index-by-merging
    algorithm at small sizes. Under fusion the articles form the owned set.
    """
    measure = Measure(measure)
    part = sorted(graph.index[a] for a in articles)
    if h == 0:
        return True
    if len(part) > limits.partition_elements:
        raise BoundExceeded("set-partition search", len(part), limits.partition_elements)
    if measure is Measure.FUSION:
        return any(h_index_from_counts(fusion_counts(graph, blocks)) >= h
                   for blocks in set_partitions(part))
    return _SubsetTable(graph, part, measure).best(h)[0] >= h


def division_gain_via_merge(graph: CitationGraph, part, h: int, measure: Measure | str,
                            limits: Limits = DEFAULT_LIMITS) -> int:
    """The same gain as :func:`division_gain`, found by padding with artificial articles.

    Artificial articles ``r_1..r_i`` each receive h citations (from h shared
    external citers); the gain is ``h - i`` for the smallest i at which some
    partition of the part plus ``r_1..r_i`` reaches h-index h. The result is
    capped at h.
    """
    measure = Measure(measure)
    part = list(part)
    names = set(graph.articles)

    def fresh(stem):
        i = 0
        while f"{stem}{i}" in names:
            i += 1
        names.add(f"{stem}{i}")
        return f"{stem}{i}"

    pads = [fresh("_r") for _ in range(h)]
    citers = [fresh("_c") for _ in range(h)]
    arcs = [(u, v) for (u, v) in graph.arcs if v in set(part)]
    arcs += [(c, r) for r in pads for c in citers]
    padded = CitationGraph(graph.articles + tuple(pads) + tuple(citers), tuple(arcs))
    for i in range(h + 1):
        if merge_subroutine(padded, part + pads[:i], h, measure, limits):
            return h - i
    return 0


def _divide_budget(g, parts, tables, whole, h, k, measure, limits):
    gains, plans = [], []
    for i, p in enumerate(parts):
        base = whole[i] >= h
        if len(p) == 1 or whole[i] < h:
            gains.append(0)
            plans.append(None)
            continue
        if tables[i] is None:
            tables[i] = _table(g, p, measure, limits)
        count, blocks = tables[i].best(h)
        gains.append(count - base)
        plans.append(blocks)
    chosen = set(_top_gains(gains, k))
    good = sum(w >= h for w in whole) + sum(gains[i] for i in chosen)
    out = []
    for i, p in enumerate(parts):
        if i in chosen:
            out.extend(plans[i])
        else:
            out.append(p)
    return out, good


def divide_conservative_solve(instance: ProblemInstance, k: int | None = None,
                              limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Conservative dividing; plain dividing is the case k = |P|.

    Each merged article's gain is the most parts with >= h citations over all
    its partitions, minus whether it already has >= h; the k best gains win.
    """
    _require(instance, Operation.DIVIDING, (Variant.PLAIN, Variant.CONSERVATIVE), _LOCAL)
    if k is None:
        k = instance.k if instance.variant is Variant.CONSERVATIVE else len(instance.profile.partition)
    g, parts, mu = instance.graph, _index_parts(instance), instance.measure
    whole = [local_cites(g, p, mu) for p in parts]
    tables: list[_SubsetTable | None] = [None] * len(parts)
    best, blocks = _maximize(lambda h: _divide_budget(g, parts, tables, whole, h, k, mu, limits),
                             instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "divide-conservative")


def divide_solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    _require(instance, Operation.DIVIDING, (Variant.PLAIN,), _LOCAL)
    return divide_conservative_solve(instance, len(instance.profile.partition), limits)


# -- atomizing, fusion -------------------------------------------------------------

def _good(counts, h):
    return sum(1 for c in counts if c >= h)


def _outside_reach(g: CitationGraph, part: Sequence[int]) -> int:
    """Citations ``part`` would get if every other merged article were atomized."""
    inside = set(part)
    seen = set()
    for v in part:
        for u in g.citers[v]:
            if u not in inside:
                seen.add(u)
    return len(seen)


def greedy_independent_set(vertices: Sequence[int], adj: dict[int, set[int]]) -> list[int]:
    """Repeatedly take a minimum-degree vertex and drop its neighbours.

    Finds at least ``|V| / (d + 1)`` vertices, d the average degree. Ties go
    to the earlier vertex in ``vertices``.
    """
    alive = {v: set(adj[v]) for v in vertices}
    order = {v: i for i, v in enumerate(vertices)}
    chosen = []
    while alive:
        v = min(alive, key=lambda x: (len(alive[x]), order[x]))
        chosen.append(v)
        gone = alive[v] | {v}
        for u in gone:
            for w in alive.pop(u, ()):
                if w in alive:
                    alive[w].discard(u)
    return chosen


def fusion_atomize_refinement(g: CitationGraph, parts: Blocks, h: int,
                              limits: Limits = DEFAULT_LIMITS) -> tuple[Blocks | None, str]:
    """Decide atomizing under fusion citations for target h.

    Returns (refinement or None, which branch decided).
    """
    if h == 0:
        return [list(p) for p in parts], "trivial"
    if _good(fusion_counts(g, parts), h) >= h:
        return [list(p) for p in parts], "already"

    # merged articles that cannot reach h even with everything else atomized
    cleaned: Blocks = []
    reach = []
    for p in parts:
        r = _outside_reach(g, p)
        if len(p) > 1 and r < h:
            cleaned.extend([v] for v in p)
            reach.extend(len(g.citers[v]) for v in p)
        else:
            cleaned.append(list(p))
            reach.append(r)
    counts = fusion_counts(g, cleaned)
    if _good(counts, h) >= h:
        return cleaned, "after-cleanup"

    low = [i for i, p in enumerate(cleaned) if reach[i] >= h and counts[i] < h]
    if len(low) >= 2 * h * h - h:
        part_of = {v: i for i, p in enumerate(cleaned) for v in p}
        low_set = set(low)
        adj = {i: set() for i in low}
        for i in low:
            for v in cleaned[i]:
                for u in g.citers[v]:
                    j = part_of.get(u)
                    if j is not None and j != i and j in low_set:
                        adj[i].add(j)
                        adj[j].add(i)
        # kept parts do not cite each other; atomizing everything else gives
        # each of them its full outside reach (>= h)
        keep = set(greedy_independent_set(low, adj))
        out: Blocks = []
        for i, p in enumerate(cleaned):
            if i in keep:
                out.append(p)
            else:
                out.extend([v] for v in p)
        assert h_index_from_counts(fusion_counts(g, out)) >= h
        return out, "independent-set"

    merged = [i for i, p in enumerate(cleaned) if len(p) > 1]
    if len(merged) > limits.subset_parts:
        raise BoundExceeded("atomize subsets", len(merged), limits.subset_parts)
    singles = [p for p in cleaned if len(p) == 1]
    for mask in range(1 << len(merged)):
        out = list(singles)
        for bit, i in enumerate(merged):
            if mask >> bit & 1:
                out.append(cleaned[i])
            else:
                out.extend([v] for v in cleaned[i])
        if h_index_from_counts(fusion_counts(g, out)) >= h:
            return out, "brute-force"
    return None, "brute-force"


def atomize_fusion_solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Atomizing under fusion citations; exponential only in the target h."""
    _require(instance, Operation.ATOMIZING, (Variant.PLAIN,), (Measure.FUSION,))
    g, parts = instance.graph, _index_parts(instance)

    def decide(h):
        blocks, _ = fusion_atomize_refinement(g, parts, h, limits)
        if blocks is None:
            return parts, -1
        return blocks, h_index_from_counts(fusion_counts(g, blocks))

    best, blocks = _maximize(decide, instance.h, _upper(instance), parts)
    return _result(instance, best, blocks, "atomize-fusion")


# -- dispatch -------------------------------------------------------------------------

def solver_for(instance: ProblemInstance) -> Callable[[ProblemInstance], SolveResult] | None:
    """The dedicated solver for the instance's problem, or None if only the oracle applies."""
    op, variant, mu = instance.operation, instance.variant, instance.measure
    if mu is Measure.FUSION:
        if op is Operation.ATOMIZING and variant is Variant.PLAIN:
            return atomize_fusion_solve
        return None
    table = {
        (Operation.ATOMIZING, Variant.PLAIN): atomize_solve,
        (Operation.ATOMIZING, Variant.CONSERVATIVE): atomize_conservative_solve,
        (Operation.EXTRACTING, Variant.PLAIN): extract_solve,
        (Operation.EXTRACTING, Variant.CAUTIOUS): extract_cautious_solve,
        (Operation.EXTRACTING, Variant.CONSERVATIVE): extract_conservative_solve,
        (Operation.DIVIDING, Variant.PLAIN): divide_solve,
        (Operation.DIVIDING, Variant.CONSERVATIVE): divide_conservative_solve,
    }
    return table.get((op, variant))


def solve(instance: ProblemInstance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Use the dedicated solver when one exists, else the exhaustive oracle."""
    from .oracle import oracle_solve

    fn = solver_for(instance)
    if fn is None:
        return oracle_solve(instance, limits)
    return fn(instance, limits=limits)
