"""Citation graphs, author profiles and problem instances.

Articles are opaque string tokens. Internally every article also has an
integer index (its declaration order), which the solvers use for array-based
bookkeeping and which fixes every tie-break in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, TextIO


class InstanceError(ValueError):
    """An instance, profile or graph violates a structural invariant."""


class FormatError(InstanceError):
    """Malformed instance text."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class Measure(str, enum.Enum):
    SUM = "sum"
    UNION = "union"
    FUSION = "fusion"


class Operation(str, enum.Enum):
    ATOMIZING = "atomizing"
    EXTRACTING = "extracting"
    DIVIDING = "dividing"


class Variant(str, enum.Enum):
    PLAIN = "plain"
    CONSERVATIVE = "conservative"
    CAUTIOUS = "cautious"


def _check_token(token: str) -> str:
    if not isinstance(token, str) or not token or any(c.isspace() for c in token):
        raise InstanceError(f"invalid article id {token!r}")
    return token


@dataclass(frozen=True)
class CitationGraph:
    """Directed graph; an arc ``(u, v)`` means article ``u`` cites ``v``."""

    articles: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    citers: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    cites: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        articles = tuple(_check_token(a) for a in self.articles)
        index: dict[str, int] = {}
        for i, a in enumerate(articles):
            if a in index:
                raise InstanceError(f"duplicate article id {a!r}")
            index[a] = i
        seen = set()
        citers: list[list[int]] = [[] for _ in articles]
        cites: list[list[int]] = [[] for _ in articles]
        for src, dst in self.arcs:
            if src not in index or dst not in index:
                missing = src if src not in index else dst
                raise InstanceError(f"arc endpoint {missing!r} is not a declared article")
            if src == dst:
                raise InstanceError(f"self-citation {src!r} -> {dst!r}")
            if (src, dst) in seen:
                raise InstanceError(f"duplicate arc {src!r} -> {dst!r}")
            seen.add((src, dst))
            citers[index[dst]].append(index[src])
            cites[index[src]].append(index[dst])
        arcs = tuple(sorted(seen, key=lambda a: (index[a[0]], index[a[1]])))
        object.__setattr__(self, "articles", articles)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "citers", tuple(tuple(sorted(c)) for c in citers))
        object.__setattr__(self, "cites", tuple(tuple(sorted(c)) for c in cites))

    @property
    def n(self) -> int:
        return len(self.articles)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def in_degree(self, article: str) -> int:
        return len(self.citers[self.index[article]])

    def citing(self, article: str) -> frozenset[str]:
        """The articles that cite ``article``."""
        return frozenset(self.articles[u] for u in self.citers[self.index[article]])

    def order_key(self, part: Iterable[str]) -> int:
        """Sort key of a part: the declaration index of its first article."""
        return min(self.index[a] for a in part)

    def is_acyclic(self) -> bool:
        indeg = [len(c) for c in self.citers]
        stack = [v for v, d in enumerate(indeg) if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for w in self.cites[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        return seen == self.n


Part = frozenset  # frozenset[str]


def _validate_partition(owned: frozenset[str], parts: Sequence[frozenset[str]]) -> None:
    covered: set[str] = set()
    for p in parts:
        if not p:
            raise InstanceError("empty part")
        stray = p - owned
        if stray:
            raise InstanceError(f"part references non-owned article(s) {sorted(stray)}")
        overlap = p & covered
        if overlap:
            raise InstanceError(f"overlapping parts share {sorted(overlap)}")
        covered |= p
    if covered != owned:
        raise InstanceError(f"partition misses owned article(s) {sorted(owned - covered)}")


@dataclass(frozen=True)
class Profile:
    """Owned articles ``owned`` and their partition into (merged) articles."""

    owned: frozenset[str]
    partition: tuple[frozenset[str], ...]

    def __post_init__(self):
        owned = frozenset(self.owned)
        parts = tuple(frozenset(p) for p in self.partition)
        _validate_partition(owned, parts)
        object.__setattr__(self, "owned", owned)
        object.__setattr__(self, "partition", parts)

    @classmethod
    def build(cls, graph: CitationGraph, owned: Iterable[str],
              parts: Iterable[Iterable[str]] = ()) -> "Profile":
        """Validate against ``graph``; unlisted owned articles become singletons.

        Parts come back in canonical order (by their first article).
        """
        owned = frozenset(owned)
        for a in owned:
            if a not in graph.index:
                raise InstanceError(f"owned article {a!r} is not a declared article")
        parts = [frozenset(p) for p in parts]
        listed = set().union(*parts) if parts else set()
        parts += [frozenset([a]) for a in owned - listed]
        parts.sort(key=graph.order_key)
        return cls(owned, tuple(parts))

    @property
    def max_part_size(self) -> int:
        return max((len(p) for p in self.partition), default=0)

    def part_of(self) -> dict[str, int]:
        return {a: i for i, p in enumerate(self.partition) for a in p}


@dataclass(frozen=True)
class Refinement:
    """A partition of the owned articles that refines a profile's partition.

    ``provenance[i]`` is the position, in the profile's partition, of the
    part that ``partition[i]`` was split from.
    """

    partition: tuple[frozenset[str], ...]
    provenance: tuple[int, ...]

    @classmethod
    def of(cls, profile: Profile, parts: Iterable[Iterable[str]],
           graph: CitationGraph | None = None) -> "Refinement":
        parts = [frozenset(p) for p in parts]
        _validate_partition(profile.owned, parts)
        if graph is not None:
            parts.sort(key=graph.order_key)
        origin = profile.part_of()
        provenance = []
        for r in parts:
            sources = {origin[a] for a in r}
            if len(sources) != 1:
                raise InstanceError(f"part {sorted(r)} spans several merged articles")
            provenance.append(sources.pop())
        return cls(tuple(parts), tuple(provenance))

    @classmethod
    def identity(cls, profile: Profile) -> "Refinement":
        return cls(profile.partition, tuple(range(len(profile.partition))))

    def parts_changed(self, profile: Profile) -> int:
        """``|P \\ R|``: merged articles that were split."""
        kept = set(self.partition)
        return sum(1 for p in profile.partition if p not in kept)

    def operations(self, profile: Profile, operation: Operation) -> int:
        """Atomizations for atomizing, otherwise ``|R| - |P|``."""
        if operation is Operation.ATOMIZING:
            return self.parts_changed(profile)
        return len(self.partition) - len(profile.partition)

    def canonical(self, graph: CitationGraph) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(graph.index[a] for a in r)) for r in self.partition))


@dataclass(frozen=True)
class ProblemInstance:
    graph: CitationGraph
    profile: Profile
    operation: Operation = Operation.ATOMIZING
    variant: Variant = Variant.PLAIN
    measure: Measure = Measure.UNION
    h: int = 0
    k: int | None = None

    def __post_init__(self):
        op = Operation(self.operation)
        variant = Variant(self.variant)
        if op is Operation.ATOMIZING and variant is Variant.CAUTIOUS:
            # one atomization per changed article: caution == conservativity
            variant = Variant.CONSERVATIVE
        object.__setattr__(self, "operation", op)
        object.__setattr__(self, "variant", variant)
        object.__setattr__(self, "measure", Measure(self.measure))
        if not isinstance(self.h, int) or self.h < 0:
            raise InstanceError(f"h must be a non-negative integer, got {self.h!r}")
        if variant is Variant.PLAIN:
            if self.k is not None:
                raise InstanceError("k is only meaningful for conservative/cautious variants")
        elif self.k is None:
            raise InstanceError(f"variant {variant.value} requires k")
        elif not isinstance(self.k, int) or self.k < 0:
            raise InstanceError(f"k must be a non-negative integer, got {self.k!r}")
        for a in self.profile.owned:
            if a not in self.graph.index:
                raise InstanceError(f"owned article {a!r} is not a declared article")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def s(self) -> int:
        return self.profile.max_part_size

    def with_problem(self, operation=None, variant=None, measure=None, h=None,
                     k: int | None | type(...) = ...) -> "ProblemInstance":
        """Copy with some problem fields replaced; ``k`` is dropped for plain."""
        variant = Variant(variant if variant is not None else self.variant)
        if k is ...:
            k = self.k
        if variant is Variant.PLAIN:
            k = None
        elif k is None:
            k = 0
        return ProblemInstance(
            self.graph, self.profile,
            operation if operation is not None else self.operation,
            variant,
            measure if measure is not None else self.measure,
            self.h if h is None else h,
            k,
        )


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple undirected graph; vertex order fixes tie-breaking."""

    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise InstanceError("duplicate vertex")
        vs = set(vertices)
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise InstanceError(f"not a simple edge: {sorted(e, key=str)}")
            if not e <= vs:
                raise InstanceError(f"edge {sorted(e, key=str)} has an unknown endpoint")
            edges.add(e)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, w = tuple(e)
            adj[u].add(w)
            adj[w].add(u)
        return adj


# -- text format -------------------------------------------------------------

_KEYWORDS = ("article", "own", "cite", "part", "problem", "variant", "measure", "h", "k")


def _lines(text: str | TextIO) -> Iterator[tuple[int, list[str]]]:
    if not isinstance(text, str):
        text = text.read()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int_arg(tokens: list[str], lineno: int) -> int:
    if len(tokens) != 2:
        raise FormatError(f"{tokens[0]} takes exactly one integer", lineno)
    try:
        value = int(tokens[1])
    except ValueError:
        raise FormatError(f"{tokens[0]} expects an integer, got {tokens[1]!r}", lineno) from None
    if value < 0:
        raise FormatError(f"{tokens[0]} must be non-negative", lineno)
    return value


def parse_instance(text: str | TextIO) -> ProblemInstance:
    """Parse the line-based instance format (see README)."""
    articles: list[str] = []
    declared: set[str] = set()
    owned: list[tuple[int, str]] = []
    arcs: list[tuple[int, str, str]] = []
    parts: list[tuple[int, list[str]]] = []
    settings: dict[str, tuple[int, str | int]] = {}

    for lineno, tokens in _lines(text):
        key = tokens[0]
        if key not in _KEYWORDS:
            raise FormatError(f"unknown directive {key!r}", lineno)
        if key == "article":
            for a in tokens[1:]:
                if a in declared:
                    raise FormatError(f"duplicate article id {a!r}", lineno)
                declared.add(a)
                articles.append(a)
            if len(tokens) < 2:
                raise FormatError("article needs an id", lineno)
        elif key == "own":
            if len(tokens) < 2:
                raise FormatError("own needs an id", lineno)
            owned.extend((lineno, a) for a in tokens[1:])
        elif key == "cite":
            if len(tokens) != 3:
                raise FormatError("cite takes <src> <dst>", lineno)
            arcs.append((lineno, tokens[1], tokens[2]))
        elif key == "part":
            if len(tokens) < 2:
                raise FormatError("part needs at least one id", lineno)
            parts.append((lineno, tokens[1:]))
        else:
            if key in settings:
                raise FormatError(f"{key} given twice", lineno)
            if key in ("h", "k"):
                settings[key] = (lineno, _int_arg(tokens, lineno))
            else:
                if len(tokens) != 2:
                    raise FormatError(f"{key} takes exactly one value", lineno)
                settings[key] = (lineno, tokens[1])

    seen_arcs = set()
    for lineno, src, dst in arcs:
        for a in (src, dst):
            if a not in declared:
                raise FormatError(f"arc endpoint {a!r} is not a declared article", lineno)
        if (src, dst) in seen_arcs:
            raise FormatError(f"duplicate arc {src} -> {dst}", lineno)
        if src == dst:
            raise FormatError(f"self-citation of {src!r}", lineno)
        seen_arcs.add((src, dst))
    owned_set: set[str] = set()
    for lineno, a in owned:
        if a not in declared:
            raise FormatError(f"owned article {a!r} is not a declared article", lineno)
        owned_set.add(a)
    covered: set[str] = set()
    for lineno, ids in parts:
        for a in ids:
            if a not in owned_set:
                raise FormatError(f"part references non-owned article {a!r}", lineno)
            if a in covered:
                raise FormatError(f"article {a!r} appears in overlapping parts", lineno)
            covered.add(a)

    enums = {"problem": Operation, "variant": Variant, "measure": Measure}
    values = {}
    for key, cls in enums.items():
        if key in settings:
            lineno, raw = settings[key]
            try:
                values[key] = cls(raw)
            except ValueError:
                choices = "|".join(c.value for c in cls)
                raise FormatError(f"{key} must be one of {choices}, got {raw!r}", lineno) from None
    if "h" not in settings:
        raise FormatError("missing h")
    variant = values.get("variant", Variant.PLAIN)
    k = settings.get("k", (None, None))[1]
    if variant is not Variant.PLAIN and k is None:
        raise FormatError(f"variant {variant.value} requires k")
    if variant is Variant.PLAIN and k is not None:
        raise FormatError("k given for the plain variant", settings["k"][0])

    graph = CitationGraph(tuple(articles), tuple((s, d) for _, s, d in arcs))
    profile = Profile.build(graph, owned_set, [ids for _, ids in parts])
    return ProblemInstance(
        graph, profile,
        values.get("problem", Operation.ATOMIZING), variant,
        values.get("measure", Measure.UNION),
        settings["h"][1], k,
    )


def serialize_instance(instance: ProblemInstance) -> str:
    """Canonical text form; ``parse_instance`` inverts it."""
    g = instance.graph
    out = []
    out.extend(f"article {a}" for a in g.articles)
    owned = sorted(instance.profile.owned, key=g.index.__getitem__)
    out.extend(f"own {a}" for a in owned)
    out.extend(f"cite {s} {d}" for s, d in g.arcs)
    for p in instance.profile.partition:
        if len(p) > 1:
            out.append("part " + " ".join(sorted(p, key=g.index.__getitem__)))
    out.append(f"problem {instance.operation.value}")
    out.append(f"variant {instance.variant.value}")
    out.append(f"measure {instance.measure.value}")
    out.append(f"h {instance.h}")
    if instance.k is not None:
        out.append(f"k {instance.k}")
    return "\n".join(out) + "\n"


def format_refinement(graph: CitationGraph, refinement: Refinement, hindex: int) -> str:
    lines = [f"hindex {hindex}"]
    for r in sorted(refinement.partition, key=graph.order_key):
        lines.append("part " + " ".join(sorted(r, key=graph.index.__getitem__)))
    return "\n".join(lines) + "\n"


def parse_refinement(text: str, instance: ProblemInstance) -> tuple[int, Refinement]:
    """Read ``hindex`` plus ``part`` lines back into a refinement."""
    hindex = None
    parts = []
    for lineno, tokens in _lines(text):
        if tokens[0] == "hindex":
            hindex = _int_arg(tokens, lineno)
        elif tokens[0] == "part":
            parts.append(tokens[1:])
        else:
            raise FormatError(f"unexpected {tokens[0]!r} in refinement", lineno)
    if hindex is None:
        raise FormatError("missing hindex")
    return hindex, Refinement.of(instance.profile, parts, instance.graph)


# -- refinement validity -----------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    refines: bool
    atomizing: bool
    extracting: bool
    dividing: bool
    parts_changed: int
    splits: int
    atomizations: int
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def allows(self, operation: Operation, variant: Variant, k: int | None) -> bool:
        ok = {Operation.ATOMIZING: self.atomizing, Operation.EXTRACTING: self.extracting,
              Operation.DIVIDING: self.dividing}[Operation(operation)]
        variant = Variant(variant)
        if variant is Variant.CONSERVATIVE or (
                variant is Variant.CAUTIOUS and Operation(operation) is Operation.ATOMIZING):
            ok = ok and self.parts_changed <= k
        elif variant is Variant.CAUTIOUS:
            ok = ok and self.splits <= k
        return ok


def validate_refinement(instance: ProblemInstance, r: Refinement) -> ValidityReport:
    """Check ``r`` against every operation's conditions and the instance's variant.

    ``violations`` only lists what breaks the instance's own (operation, variant, k).
    """
    profile = instance.profile
    original = set(profile.partition)
    refines = True
    try:
        _validate_partition(profile.owned, list(r.partition))
    except InstanceError:
        refines = False
    origin = profile.part_of()
    inner: dict[int, int] = {}
    atomizing = True
    for part in r.partition:
        sources = {origin.get(a) for a in part}
        if len(sources) != 1 or None in sources:
            refines = False
            continue
        src = sources.pop()
        if len(part) > 1 and part not in original:
            atomizing = False
            inner[src] = inner.get(src, 0) + 1
    extracting = refines and all(c <= 1 for c in inner.values())
    atomizing = refines and atomizing
    changed = sum(1 for p in profile.partition if p not in set(r.partition))
    splits = len(r.partition) - len(profile.partition)
    report = dict(refines=refines, atomizing=atomizing, extracting=extracting, dividing=refines,
                  parts_changed=changed, splits=splits, atomizations=changed)

    violations = []
    if not refines:
        violations.append("not a refinement of the profile's partition")
    op, variant, k = instance.operation, instance.variant, instance.k
    if refines and op is Operation.ATOMIZING and not atomizing:
        violations.append("a part is neither a singleton nor an original merged article")
    if refines and op is Operation.EXTRACTING and not extracting:
        violations.append("a merged article keeps more than one non-singleton remainder")
    if variant is Variant.CONSERVATIVE and changed > k:
        violations.append(f"{changed} merged articles changed, budget {k}")
    if variant is Variant.CAUTIOUS and splits > k:
        violations.append(f"{splits} split operations, budget {k}")
    return ValidityReport(**report, violations=tuple(violations))
