import random

import pytest
from hypothesis import strategies as st

from hsplit import CitationGraph, ProblemInstance, Profile, load_example


@pytest.fixture
def merge_example():
    return load_example("merge_example")


@pytest.fixture
def split_example():
    return load_example("split_example")


def random_instance(rng: random.Random, max_articles=10, max_owned=8, max_part=None):
    """Small random acyclic instance; problem fields left at their defaults."""
    n = rng.randint(0, max_articles)
    names = [f"a{i}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    density = rng.choice([0.15, 0.3, 0.5])
    arcs = [(u, v) for i, u in enumerate(order) for v in order[i + 1:] if rng.random() < density]
    owned = rng.sample(names, rng.randint(0, min(n, max_owned)))
    groups: list[list[str]] = []
    for a in owned:
        fits = [g for g in groups if max_part is None or len(g) < max_part]
        if fits and rng.random() < 0.6:
            rng.choice(fits).append(a)
        else:
            groups.append([a])
    graph = CitationGraph(tuple(names), tuple(arcs))
    return ProblemInstance(graph, Profile.build(graph, owned, groups))


@st.composite
def instances(draw, max_articles=10, max_owned=8, max_part=None):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(random.Random(seed), max_articles, max_owned, max_part)


ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    """Log one acceptance criterion outcome; printed at the end of the session."""
    def _record(name: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((name, ok, detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
