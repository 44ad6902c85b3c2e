"""Instance generators for the three hardness constructions.

Each generator turns an instance of a classic NP-hard problem into a
splitting instance that is feasible exactly when the source instance is a
yes-instance. The brute-force source solvers at the bottom exist so the
equivalence can be checked on small inputs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .graph import (CitationGraph, FormatError, Measure, Operation, ProblemInstance, Profile,
                    UndirectedGraph, Variant)


class ReductionWarning(UserWarning):
    """The source instance violates an assumption the construction relies on."""


# -- bin packing -> cautious dividing (sum) --------------------------------------

@dataclass(frozen=True)
class BinPackingInstance:
    sizes: tuple[int, ...]
    bins: int
    capacity: int

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s <= 0 for s in sizes):
            raise ValueError("item sizes must be positive")
        if self.bins <= 0 or self.capacity <= 0:
            raise ValueError("bins and capacity must be positive")
        object.__setattr__(self, "sizes", sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def slack(self) -> int:
        return self.bins * self.capacity - self.total


def reduce_binpacking(bp: BinPackingInstance) -> ProblemInstance:
    """Cautious dividing under sum: can P* be cut into ``bins`` parts of sum >= capacity?

    Item article ``a<i>`` is cited by ``x1..x<s_i>``, each filler ``u<i>`` by
    ``x1``; they form one merged article. ``capacity - bins`` singletons
    ``h<i>`` cited by ``x1..x<capacity>`` fill the rest of the h-index.
    """
    s_total, bins, cap = bp.total, bp.bins, bp.capacity
    delta = bp.slack
    if delta < 0:
        raise ValueError(f"items of total size {s_total} cannot fit into {bins} bins of capacity {cap}")
    if cap < bins:
        raise ValueError("the construction needs capacity >= bins (it adds capacity - bins singletons)")
    if cap >= s_total:
        warnings.warn("capacity >= total size: everything fits into one bin", ReductionWarning, stacklevel=2)
    if bins >= cap:
        warnings.warn("bins >= capacity: outside the construction's assumptions", ReductionWarning,
                      stacklevel=2)

    # the h<i> need `cap` citers, which may exceed s*
    xs = [f"x{j}" for j in range(1, max(s_total, cap) + 1)]
    items = [f"a{i}" for i in range(1, len(bp.sizes) + 1)]
    fillers = [f"u{i}" for i in range(1, delta + 1)]
    extra = [f"h{i}" for i in range(1, cap - bins + 1)]
    arcs = [(xs[j], a) for a, s in zip(items, bp.sizes) for j in range(s)]
    arcs += [(xs[0], u) for u in fillers]
    arcs += [(xs[j], hh) for hh in extra for j in range(cap)]
    graph = CitationGraph(tuple(xs + items + fillers + extra), tuple(arcs))
    owned = items + fillers + extra
    profile = Profile.build(graph, owned, [items + fillers])
    return ProblemInstance(graph, profile, Operation.DIVIDING, Variant.CAUTIOUS, Measure.SUM,
                           h=cap, k=bins - 1)


def parse_binpacking(text: str) -> BinPackingInstance:
    """``sizes 3 2 2 1`` / ``bins 2`` / ``capacity 4`` lines (commas also separate sizes)."""
    fields: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").split()
        if not line:
            continue
        key, *values = line
        if key not in ("sizes", "bins", "capacity"):
            raise FormatError(f"unknown directive {key!r}", lineno)
        if key in fields:
            raise FormatError(f"repeated directive {key!r}", lineno)
        if not values or (key != "sizes" and len(values) != 1):
            raise FormatError(f"bad arguments for {key!r}", lineno)
        fields[key] = values
    try:
        return BinPackingInstance(tuple(int(v) for v in fields["sizes"]), int(fields["bins"][0]),
                                  int(fields["capacity"][0]))
    except KeyError as e:
        raise FormatError(f"missing directive {e.args[0]!r}") from None
    except ValueError as e:
        raise FormatError(str(e)) from None


def binpacking_feasible(bp: BinPackingInstance) -> bool:
    """Backtracking: can the items be packed into ``bins`` bins of size ``capacity``?"""
    sizes = sorted(bp.sizes, reverse=True)
    loads = [0] * bp.bins

    def place(i: int) -> bool:
        if i == len(sizes):
            return True
        seen = set()
        for b in range(bp.bins):
            if loads[b] in seen or loads[b] + sizes[i] > bp.capacity:
                continue
            seen.add(loads[b])
            loads[b] += sizes[i]
            if place(i + 1):
                return True
            loads[b] -= sizes[i]
        return False

    return place(0)


# -- 3-SAT -> atomizing (fusion) -------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    """Clauses of exactly three literals; literal ``+i`` / ``-i`` is variable i (1-based).

    Shorter clauses are written by repeating a literal.
    """

    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have three literals")
            if any(x == 0 or abs(x) > self.n for x in c):
                raise ValueError(f"clause {c} uses an unknown variable")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF; clauses with one or two literals are padded by repeating the last one."""
    n = None
    expected = None
    clauses = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            tok = line.split()
            if len(tok) != 4 or tok[1] != "cnf" or n is not None:
                raise FormatError("expected a single 'p cnf <vars> <clauses>' line", lineno)
            try:
                n, expected = int(tok[2]), int(tok[3])
            except ValueError:
                raise FormatError("non-integer in problem line", lineno) from None
            continue
        if n is None:
            raise FormatError("clause before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise FormatError("empty clause", lineno)
                if len(current) > 3:
                    raise FormatError("clause with more than three literals", lineno)
                while len(current) < 3:
                    current.append(current[-1])
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > n:
                raise FormatError(f"literal {lit} exceeds the variable count", lineno)
            else:
                current.append(lit)
    if n is None:
        raise FormatError("missing problem line")
    if current:
        raise FormatError("last clause is not terminated by 0")
    if expected != len(clauses):
        raise FormatError(f"problem line announces {expected} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def reduce_3sat(f: CnfFormula) -> ProblemInstance:
    """Atomizing under fusion with h = n + m.

    Variable i gets merged articles ``XF<i>`` and ``XT<i>`` of 2(n+m) articles
    each; atomizing exactly one of them encodes its truth value (atomizing
    ``XT<i>`` means x_i is true). Clause j is the singleton ``C<j>``, cited by
    the first n+m articles of the set that belongs to each of its literals.
    """
    n, m = f.n, f.m
    big = n + m
    if big <= 3:
        raise ValueError("the construction needs n + m > 3")
    names: list[str] = []
    parts = []
    arcs: list[tuple[str, str]] = []

    def xf(i, l):
        return f"XF{i}_{l}"

    def xt(i, l):
        return f"XT{i}_{l}"

    for i in range(1, n + 1):
        fs = [xf(i, l) for l in range(1, 2 * big + 1)]
        ts = [xt(i, l) for l in range(1, 2 * big + 1)]
        names += fs + ts
        parts += [fs, ts]
        for l in range(1, big + 1):
            arcs.append((xf(i, l), xt(i, 2 * l)))
            arcs.append((xt(i, l), xf(i, 2 * l)))
    clause_ids = [f"C{j}" for j in range(1, m + 1)]
    names += clause_ids
    for cid, clause in zip(clause_ids, f.clauses):
        for lit in sorted(set(clause), key=lambda x: (abs(x), x)):
            src = xt if lit > 0 else xf
            arcs += [(src(abs(lit), l), cid) for l in range(1, big + 1)]
    graph = CitationGraph(tuple(names), tuple(arcs))
    profile = Profile.build(graph, names, parts)
    return ProblemInstance(graph, profile, Operation.ATOMIZING, Variant.PLAIN, Measure.FUSION, h=big)


def satisfiable(f: CnfFormula) -> bool:
    for bits in product((False, True), repeat=f.n):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in c) for c in f.clauses):
            return True
    return False


# -- clique -> conservative atomizing (fusion) -----------------------------------

def parse_edgelist(text: str) -> UndirectedGraph:
    """One edge ``u v`` per line; a line with a single token declares an isolated vertex."""
    vertices: dict[str, None] = {}
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        if len(tok) > 2:
            raise FormatError("expected '<u> <v>' or a single vertex", lineno)
        if len(tok) == 2 and tok[0] == tok[1]:
            raise FormatError("self-loop", lineno)
        for v in tok:
            vertices.setdefault(v)
        if len(tok) == 2:
            edges.add(frozenset(tok))
    return UndirectedGraph(tuple(vertices), frozenset(edges))


def reduce_clique(g: UndirectedGraph, k: int, operation: Operation | str = Operation.ATOMIZING,
                  variant: Variant | str = Variant.CONSERVATIVE) -> ProblemInstance:
    """Fusion instance with h = C(k, 2) that is feasible iff ``g`` has a k-clique.

    Vertex v becomes a merged article ``R<v>`` of ceil(C(k,2)/2) articles; edge
    {v, w} becomes the singleton ``e_<v>_<w>`` cited by every article of
    ``R<v>`` and ``R<w>``. The default target is conservative atomizing with
    budget k. Extracting or dividing targets use budget k when conservative
    and k * (|R<v>| - 1) when cautious, which is what atomizing k parts costs.
    """
    if k < 1:
        raise ValueError("k must be positive")
    operation, variant = Operation(operation), Variant(variant)
    if variant is Variant.PLAIN:
        raise ValueError("the clique construction needs a budget; use conservative or cautious")
    if operation is Operation.ATOMIZING and variant is Variant.CAUTIOUS:
        variant = Variant.CONSERVATIVE
    if k < 4:
        warnings.warn("k < 4: the construction's correctness argument assumes k >= 4",
                      ReductionWarning, stacklevel=2)
    h = comb(k, 2)
    size = -(-h // 2)
    labels = [str(v) for v in g.vertices]
    if len(set(labels)) != len(labels):
        raise ValueError("vertex labels collide after conversion to strings")
    label = dict(zip(g.vertices, labels))
    pos = {v: i for i, v in enumerate(g.vertices)}
    groups = {v: [f"R{label[v]}_{l}" for l in range(1, size + 1)] for v in g.vertices}
    names = [a for v in g.vertices for a in groups[v]]
    arcs = []
    edge_ids = []
    for e in sorted(g.edges, key=lambda e: sorted(pos[v] for v in e)):
        v, w = sorted(e, key=pos.__getitem__)
        eid = f"e_{label[v]}_{label[w]}"
        edge_ids.append(eid)
        arcs += [(r, eid) for r in groups[v] + groups[w]]
    names += edge_ids
    graph = CitationGraph(tuple(names), tuple(arcs))
    profile = Profile.build(graph, names, [groups[v] for v in g.vertices])
    budget = k * (size - 1) if variant is Variant.CAUTIOUS else k
    return ProblemInstance(graph, profile, operation, variant, Measure.FUSION, h=h, k=budget)


def has_clique(g: UndirectedGraph, k: int) -> bool:
    adj = g.adjacency()
    return any(all(w in adj[v] for v, w in combinations(c, 2))
               for c in combinations(g.vertices, k))


def clique_graph(n: int) -> UndirectedGraph:
    vs = tuple(range(1, n + 1))
    return UndirectedGraph(vs, frozenset(frozenset(e) for e in combinations(vs, 2)))


def graph_from_edges(vertices: Iterable, edges: Iterable[Sequence]) -> UndirectedGraph:
    return UndirectedGraph(tuple(vertices), frozenset(frozenset(e) for e in edges))
