import random

import pytest
from hypothesis import given, settings, strategies as st

from hsplit import (BoundExceeded, CitationGraph, Limits, Measure, Operation, ProblemInstance,
                    Profile, Refinement, Variant, atomize_conservative_solve, atomize_fusion_solve,
                    atomize_solve, divide_conservative_solve, divide_solve, extract_cautious_solve,
                    extract_conservative_solve, extract_solve, h_index, merge_subroutine,
                    oracle_solve, solve, solver_for, validate_refinement)
from hsplit.measures import h_index_from_counts, fusion_counts
from hsplit.reductions import BinPackingInstance, reduce_binpacking
from hsplit.solvers import (division_gain, division_gain_via_merge, fusion_atomize_refinement,
                            greedy_independent_set)

from conftest import instances, random_instance

# (operation, variant, measure) for every dedicated solver
SOLVED = [(op, v, m) for m in ("sum", "union") for op, v in [
    ("atomizing", "plain"), ("atomizing", "conservative"),
    ("extracting", "plain"), ("extracting", "cautious"), ("extracting", "conservative"),
    ("dividing", "plain"), ("dividing", "conservative"),
]] + [("atomizing", "plain", "fusion")]


def test_dispatch_covers_exactly_the_tractable_cases(split_example):
    for op in Operation:
        for v in Variant:
            for m in Measure:
                inst = split_example.with_problem(op, v, m, k=None if v is Variant.PLAIN else 1)
                key = (inst.operation.value, inst.variant.value, inst.measure.value)
                assert (solver_for(inst) is not None) == (key in SOLVED)


# -- worked examples ------------------------------------------------------------------

def test_atomizing_split_example(split_example):
    inst = split_example.with_problem(Operation.ATOMIZING, h=1)
    res = atomize_solve(inst)
    assert res.feasible and res.achieved_h == 1
    assert not atomize_solve(inst.with_problem(h=2)).feasible


def test_atomizing_already_good(merge_example):
    inst = merge_example.with_problem(measure="union", h=2)
    assert atomize_solve(inst).feasible


def test_conservative_atomizing_merge_example(merge_example):
    inst = merge_example.with_problem(variant="conservative", measure="union", h=2, k=0)
    assert atomize_conservative_solve(inst).feasible
    assert not atomize_conservative_solve(inst.with_problem(h=3, k=3)).feasible


def test_conservative_atomizing_picks_one_part():
    # two merged articles that atomize into two 3-cited articles each, one lone 3-cited article
    arts = ["x1", "x2", "x3", "p1", "p2", "q1", "q2", "s"]
    arcs = [(x, a) for a in ("p1", "p2", "q1", "q2", "s") for x in ("x1", "x2", "x3")]
    g = CitationGraph(tuple(arts), tuple(arcs))
    prof = Profile.build(g, arts[3:], [["p1", "p2"], ["q1", "q2"]])
    inst = ProblemInstance(g, prof, "atomizing", "conservative", "union", h=3, k=1)
    res = atomize_conservative_solve(inst)
    assert res.feasible and res.parts_changed == 1
    assert oracle_solve(inst).feasible


def test_extracting_split_example(split_example):
    res = extract_solve(split_example)
    assert res.feasible
    assert set(res.refinement.partition) == {frozenset({"r1", "r2", "r3"}), frozenset({"r4"})}
    cautious = split_example.with_problem(variant="cautious", k=0)
    assert not extract_cautious_solve(cautious).feasible
    conservative = split_example.with_problem(variant="conservative", k=1)
    assert extract_conservative_solve(conservative).feasible


def test_merge_subroutine_examples(split_example):
    one = CitationGraph(("x", "a"), (("x", "a"),))
    assert merge_subroutine(one, ["a"], 1, "sum")
    # one part cannot have h-index 2, however often it is cited
    g = CitationGraph(("x", "y", "a"), (("x", "a"), ("y", "a")))
    assert not merge_subroutine(g, ["a"], 2, "sum")
    assert merge_subroutine(split_example.graph, ["r1", "r2", "r3", "r4"], 2, "union")
    assert not merge_subroutine(split_example.graph, ["r1", "r2", "r3", "r4"], 3, "union")
    assert not merge_subroutine(g, [], 1, "union")


def test_merge_subroutine_bound():
    names = tuple(f"a{i}" for i in range(13))
    with pytest.raises(BoundExceeded):
        merge_subroutine(CitationGraph(names, ()), names, 1, "sum")


def test_conservative_dividing_split_example(split_example):
    inst = split_example.with_problem(Operation.DIVIDING, Variant.CONSERVATIVE, k=1)
    res = divide_conservative_solve(inst)
    assert res.feasible and res.achieved_h == 2
    counts = sorted(len(set().union(*(inst.graph.citing(a) for a in p))) for p in res.refinement.partition)
    assert all(c >= 2 for c in counts)
    assert divide_conservative_solve(inst.with_problem(h=0)).feasible


def test_conservative_dividing_on_packing_instance():
    inst = reduce_binpacking(BinPackingInstance((3, 2, 2, 1), 2, 4))
    assert divide_conservative_solve(inst.with_problem(variant="conservative", k=1)).feasible


def test_fusion_trivial_accept():
    h = 3
    arts = [f"x{i}_{j}" for i in range(h) for j in range(h)] + [f"p{i}" for i in range(h)]
    arcs = [(f"x{i}_{j}", f"p{i}") for i in range(h) for j in range(h)]
    g = CitationGraph(tuple(arts), tuple(arcs))
    inst = ProblemInstance(g, Profile.build(g, [f"p{i}" for i in range(h)]), measure="fusion", h=h)
    res = atomize_fusion_solve(inst)
    assert res.feasible and res.refinement == Refinement.identity(inst.profile)


def test_fusion_merge_example(merge_example):
    res = atomize_fusion_solve(merge_example)
    assert res.feasible and res.achieved_h == 2
    assert h_index(merge_example.graph, res.refinement, "fusion") == 2


def test_greedy_independent_set():
    # path 0-1-2-3-4: min degree first takes 0, 2, 4
    adj = {0: {1}, 1: {0, 2}, 2: {1, 3}, 3: {2, 4}, 4: {3}}
    assert greedy_independent_set(range(5), adj) == [0, 2, 4]


# -- the independent-set shortcut -------------------------------------------------------

def hub_family(rng: random.Random, h: int):
    """Many low merged articles of size h, each cited once per member by one hub part.

    Hubs are cited by h outside articles, so they alone are good; extra arcs
    between low parts are added without letting any part get h citers.
    """
    n_low = 2 * h * h - h + rng.randint(0, 4)
    n_hubs = rng.randint(1, h - 1)
    arts, arcs, parts = [], [], []
    hubs = []
    for j in range(n_hubs):
        hub = [f"c{j}_{i}" for i in range(h * n_low)]
        hubs.append(hub)
        parts.append(hub)
        arts += hub
        ext = [f"x{j}_{i}" for i in range(h)]
        arts += ext
        arcs += [(x, hub[0]) for x in ext]
    lows = []
    for i in range(n_low):
        low = [f"l{i}_{t}" for t in range(h)]
        lows.append(low)
        parts.append(low)
        arts += low
        hub = hubs[i % n_hubs]
        arcs += [(hub[i * h + t], low[t]) for t in range(h)]
    # a few low-to-low citations (earlier cites later), keeping every low part below h
    citing = [1] * n_low
    for i in range(n_low):
        for j in range(i + 1, n_low):
            if rng.random() < 0.08 and citing[j] + 1 < h:
                arcs.append((lows[i][0], lows[j][rng.randrange(h)]))
                citing[j] += 1
    g = CitationGraph(tuple(arts), tuple(arcs))
    prof = Profile.build(g, [a for p in parts for a in p], parts)
    return ProblemInstance(g, prof, measure="fusion", h=h)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from([2, 3]))
def test_independent_set_branch(rng, h):
    inst = hub_family(rng, h)
    g = inst.graph
    parts = [sorted(g.index[a] for a in p) for p in inst.profile.partition]
    blocks, branch = fusion_atomize_refinement(g, parts, h)
    assert branch == "independent-set"
    assert h_index_from_counts(fusion_counts(g, blocks)) >= h


# -- oracle equivalence -------------------------------------------------------------------

def check_against_oracle(inst):
    fast, slow = solve(inst), oracle_solve(inst)
    assert (fast.feasible, fast.achieved_h) == (slow.feasible, slow.achieved_h)
    if fast.refinement is not None:
        assert validate_refinement(inst, fast.refinement).valid
        assert h_index(inst.graph, fast.refinement, inst.measure) == fast.achieved_h
        assert fast.operations_used == fast.refinement.operations(inst.profile, inst.operation)


@pytest.mark.parametrize("op, variant, measure", SOLVED)
def test_seeded_oracle_equivalence(op, variant, measure):
    rng = random.Random(f"{op}-{variant}-{measure}")
    for _ in range(200):
        inst = random_instance(rng)
        h = rng.randint(0, 4)
        k = None if variant == "plain" else rng.randint(0, 3)
        check_against_oracle(inst.with_problem(op, variant, measure, h=h, k=k))


@settings(max_examples=150, deadline=None)
@given(instances(), st.sampled_from(SOLVED), st.integers(0, 4), st.integers(0, 3))
def test_oracle_equivalence(inst, problem, h, k):
    op, variant, measure = problem
    check_against_oracle(inst.with_problem(op, variant, measure, h=h, k=None if variant == "plain" else k))


@settings(max_examples=100, deadline=None)
@given(instances(max_part=8), st.sampled_from(["sum", "union"]), st.integers(1, 5))
def test_division_gain_two_ways(inst, measure, h):
    g = inst.graph
    for p in inst.profile.partition:
        direct = division_gain(g, sorted(g.index[a] for a in p), h, Measure(measure))
        # padding can only certify up to h good parts
        assert min(direct, h) == division_gain_via_merge(g, sorted(p), h, measure)


def test_limits_are_enforced():
    names = tuple(f"a{i}" for i in range(14))
    g = CitationGraph(("x",) + names, tuple(("x", a) for a in names))
    prof = Profile.build(g, names, [names])
    big = ProblemInstance(g, prof, "dividing", "conservative", "sum", h=1, k=1)
    with pytest.raises(BoundExceeded):
        divide_conservative_solve(big)
    assert divide_conservative_solve(big, limits=Limits(partition_elements=14)).achieved_h == 3
