"""Synthetic merged profiles.

A profile with merged articles is obtained from article titles: articles whose
title word sets overlap enough are *compatible*, and maximal cliques of the
compatibility graph are greedily merged. Random citation graphs for tests and
experiments also live here; all of them are acyclic by construction.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import CitationGraph, Profile, ProblemInstance, UndirectedGraph

_WORD = re.compile(r"[a-z0-9]+")


def title_words(title: str) -> frozenset[str]:
    """Lowercased alphanumeric tokens; no stop-word removal."""
    return frozenset(_WORD.findall(title.lower()))


@dataclass(frozen=True)
class TitledArticle:
    id: str
    title: str

    @property
    def words(self) -> frozenset[str]:
        return title_words(self.title)


def as_threshold(t) -> Fraction:
    """Exact threshold in [0, 1]; floats go through their shortest repr (0.4 -> 2/5)."""
    if isinstance(t, float):
        t = repr(t)
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"compatibility threshold must lie in [0, 1], got {t}")
    return t


def compatibility_graph(articles: Sequence[TitledArticle], t) -> UndirectedGraph:
    """Edge {u, v} iff |T(u) & T(v)| >= t * |T(u) | T(v)|, compared exactly.

    Articles with an empty title word set get no edges.
    """
    t = as_threshold(t)
    words = [a.words for a in articles]
    edges = []
    for i in range(len(articles)):
        if not words[i]:
            continue
        for j in range(i + 1, len(articles)):
            if words[j] and len(words[i] & words[j]) >= t * len(words[i] | words[j]):
                edges.append((articles[i].id, articles[j].id))
    return UndirectedGraph(tuple(a.id for a in articles), frozenset(frozenset(e) for e in edges))


def greedy_merge(g: UndirectedGraph) -> list[frozenset]:
    """Split the vertices into greedily grown maximal cliques.

    While edges remain: seed with the first vertex of maximum degree, keep
    adding the first vertex adjacent to the whole clique, emit the clique and
    delete it. Vertices left without edges become singletons. "First" means
    first in ``g.vertices``.
    """
    adj = g.adjacency()
    order = {v: i for i, v in enumerate(g.vertices)}
    alive = list(g.vertices)
    parts = []
    while any(adj[v] for v in alive):
        seed = max(alive, key=lambda v: (len(adj[v]), -order[v]))
        clique = [seed]
        common = set(adj[seed])
        while common:
            nxt = min(common, key=order.__getitem__)
            clique.append(nxt)
            common &= adj[nxt]
        parts.append(frozenset(clique))
        gone = set(clique)
        alive = [v for v in alive if v not in gone]
        for v in alive:
            adj[v] -= gone
    parts.extend(frozenset([v]) for v in alive)
    return parts


def read_titles(text: str) -> list[TitledArticle]:
    """``<id>\\t<title>`` per line; blank lines and ``#`` lines are skipped."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if "\t" not in line:
            raise ValueError(f"line {lineno}: expected '<id>\\t<title>'")
        ident, title = line.split("\t", 1)
        out.append(TitledArticle(ident.strip(), title.strip()))
    return out


def merged_profile(graph: CitationGraph, articles: Sequence[TitledArticle], t) -> Profile:
    """Profile over the titled articles, merged along the compatibility graph at threshold t."""
    parts = greedy_merge(compatibility_graph(articles, t))
    return Profile.build(graph, [a.id for a in articles], parts)


# -- random instances -------------------------------------------------------------

def random_profile(n_articles: int, n_external: int = 0, arc_density: float = 0.3,
                   merge_rate: float = 0.5, seed: int | None = None,
                   max_part_size: int | None = None) -> ProblemInstance:
    """Random acyclic citation graph with a random merged profile.

    ``n_articles`` owned articles ``w<i>`` plus ``n_external`` others ``x<i>``.
    Arcs follow a random topological order, each present with probability
    ``arc_density``. Each owned article joins an existing merged article with
    probability ``merge_rate``. Problem fields are left at their defaults.
    """
    rng = random.Random(seed)
    owned = [f"w{i}" for i in range(n_articles)]
    external = [f"x{i}" for i in range(n_external)]
    names = owned + external
    order = names[:]
    rng.shuffle(order)
    arcs = []
    for i, u in enumerate(order):
        for v in order[i + 1:]:
            if rng.random() < arc_density:
                arcs.append((u, v))
    graph = CitationGraph(tuple(names), tuple(arcs))
    groups: list[list[str]] = []
    shuffled = owned[:]
    rng.shuffle(shuffled)
    for a in shuffled:
        open_groups = [grp for grp in groups if max_part_size is None or len(grp) < max_part_size]
        if open_groups and rng.random() < merge_rate:
            rng.choice(open_groups).append(a)
        else:
            groups.append([a])
    return ProblemInstance(graph, Profile.build(graph, owned, groups))


def sparse_random_profile(n_articles: int, n_arcs: int, owned_fraction: float = 0.5,
                          mean_part_size: float = 3.0, seed: int | None = None) -> ProblemInstance:
    """Large sparse random instance (arcs sampled, not enumerated); used for timing."""
    rng = random.Random(seed)
    names = [f"a{i}" for i in range(n_articles)]
    rank = list(range(n_articles))
    rng.shuffle(rank)
    arcs = set()
    if n_articles > 1:
        limit = n_articles * (n_articles - 1) // 2
        while len(arcs) < min(n_arcs, limit):
            u, v = rng.randrange(n_articles), rng.randrange(n_articles)
            if u == v:
                continue
            if rank[u] > rank[v]:
                u, v = v, u
            arcs.add((names[u], names[v]))
    graph = CitationGraph(tuple(names), tuple(arcs))
    owned = [a for a in names if rng.random() < owned_fraction]
    rng.shuffle(owned)
    parts = []
    i = 0
    while i < len(owned):
        size = max(1, min(len(owned) - i, int(rng.expovariate(1 / mean_part_size)) + 1))
        parts.append(owned[i:i + size])
        i += size
    return ProblemInstance(graph, Profile.build(graph, owned, parts))


_VOCAB = (
    "learning graph neural network deep model algorithm complexity parameterized "
    "approximation search planning reasoning logic constraint satisfaction game "
    "theory voting social choice manipulation bribery control election robust "
    "optimization stochastic bayesian inference probabilistic agent multi "
    "distributed scheduling kernel tree width clique matching flow cut random "
    "sampling efficient exact hardness fixed tractable structure data stream "
    "online adaptive dynamic sparse linear convex program boolean circuit query"
).split()


@dataclass(frozen=True)
class SyntheticAuthor:
    graph: CitationGraph
    articles: tuple[TitledArticle, ...]

    def profile(self, t) -> Profile:
        return merged_profile(self.graph, self.articles, t)


def synthetic_author(seed: int, n_works: int = 8, max_versions: int = 3, n_external: int = 24,
                     self_cite: float = 0.15) -> SyntheticAuthor:
    """An author whose works appear in several versions with similar titles.

    Versions of a work share most title words and draw citations from a common
    pool of citers, so merging them changes citation counts the way real
    duplicate records do.
    """
    rng = random.Random(seed)
    externals = [f"c{i}" for i in range(n_external)]
    articles: list[TitledArticle] = []
    work_of: dict[str, int] = {}
    arcs: set[tuple[str, str]] = set()
    for w in range(n_works):
        base = rng.sample(_VOCAB, rng.randint(4, 7))
        versions = rng.randint(1, max_versions)
        popularity = int(n_external * rng.random() ** 1.5) + 1
        pool = rng.sample(externals, popularity)
        for j in range(versions):
            words = base[:]
            for _ in range(rng.randint(0, 2)):
                if rng.random() < 0.5 and len(words) > 3:
                    words.pop(rng.randrange(len(words)))
                else:
                    words.append(rng.choice(_VOCAB))
            ident = f"p{w}v{j}"
            articles.append(TitledArticle(ident, " ".join(words)))
            work_of[ident] = w
            share = rng.uniform(0.3, 0.9)
            for c in pool:
                if rng.random() < share:
                    arcs.add((c, ident))
    # later works may cite earlier ones; keeps the graph acyclic
    for a in articles:
        for b in articles:
            if work_of[a.id] > work_of[b.id] and rng.random() < self_cite:
                arcs.add((a.id, b.id))
    names = tuple(a.id for a in articles) + tuple(externals)
    graph = CitationGraph(names, tuple(sorted(arcs)))
    return SyntheticAuthor(graph, tuple(articles))
