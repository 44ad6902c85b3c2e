"""Acceptance gate: one test (and one PASS/FAIL line) per criterion."""

import gc
import random
import time
import warnings
from itertools import combinations_with_replacement, permutations, product

import networkx as nx
import pytest
from sympy.utilities.iterables import partitions

from hsplit import (Limits, Measure, Operation, count_refinements, h_index, load_example,
                    oracle_solve, part_citations, solve, validate_refinement)
from hsplit.cli import main
from hsplit.experiment import cell_instance, read_csv, sweep_violations
from hsplit.profiles import TitledArticle, compatibility_graph, sparse_random_profile
from hsplit.reductions import (BinPackingInstance, CnfFormula, binpacking_feasible,
                               graph_from_edges, has_clique, reduce_3sat, reduce_binpacking,
                               reduce_clique, satisfiable)
from hsplit.measures import to_index
from hsplit.solvers import (atomize_conservative_refinement, atomize_refinement,
                            extract_cautious_refinement, extract_conservative_refinement,
                            extract_refinement)

from conftest import random_instance
from test_oracle import relabel
from test_solvers import SOLVED


def test_1_merge_example_measures(record):
    t0 = time.perf_counter()
    inst = load_example("merge_example")
    g, p = inst.graph, inst.profile
    got = {m: dict(zip(p.partition, part_citations(g, p, m))) for m in ("sum", "union", "fusion")}
    v45, v6 = frozenset({"v4", "v5"}), frozenset({"v6"})
    values = (got["sum"][v45], got["union"][v45], got["union"][v6], got["fusion"][v45], got["fusion"][v6])
    elapsed = time.perf_counter() - t0
    ok = values == (3, 2, 2, 1, 1) and elapsed < 1
    assert record("1 merge-example measures", ok, f"sum/union/union/fusion/fusion = {values}, {elapsed:.3f}s")


def test_2_split_example_power(record):
    t0 = time.perf_counter()
    inst = load_example("split_example")
    best = {}
    for op in Operation:
        variant = inst.with_problem(op, h=0)
        fast, slow = solve(variant), oracle_solve(variant)
        assert fast.achieved_h == slow.achieved_h
        best[op.value] = fast.achieved_h
    elapsed = time.perf_counter() - t0
    ok = best == {"atomizing": 1, "extracting": 2, "dividing": 2} and elapsed < 1
    assert record("2 split-example operation power", ok, f"{best}, {elapsed:.3f}s")


def test_3_oracle_equivalence(record):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    checked = mismatches = 0
    for _ in range(200):
        base = random_instance(rng, max_articles=10, max_owned=8)
        for op, variant, measure in SOLVED:
            k = None if variant == "plain" else rng.randint(0, 3)
            inst = base.with_problem(op, variant, measure, h=rng.randint(0, 4), k=k)
            fast, slow = solve(inst), oracle_solve(inst)
            checked += 1
            if (fast.feasible, fast.achieved_h) != (slow.feasible, slow.achieved_h):
                mismatches += 1
            elif fast.refinement is not None and not validate_refinement(inst, fast.refinement).valid:
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 120
    assert record("3 oracle equivalence", ok,
                  f"200 instances x {len(SOLVED)} solvers, {mismatches} mismatches, {elapsed:.1f}s")


# -- 4: reductions ---------------------------------------------------------------------------

ROUND_TRIP_SECONDS: dict[str, float] = {}


def integer_multisets(max_total):
    for total in range(1, max_total + 1):
        for p in partitions(total):
            yield tuple(sorted((s for s, c in p.items() for _ in range(c)), reverse=True))


def test_4a_binpacking_round_trip(record):
    """Every item multiset with total <= 10 and 1..3 bins.

    The capacity is the smallest one the construction accepts (bins * capacity
    >= total, capacity >= bins) plus the next one while P* stays small enough
    to enumerate its divisions.
    """
    t0 = time.perf_counter()
    checked = mismatches = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for sizes in integer_multisets(10):
            total = sum(sizes)
            for bins in (1, 2, 3):
                smallest = max(bins, -(-total // bins))
                for cap in (smallest, smallest + 1):
                    bp = BinPackingInstance(sizes, bins, cap)
                    inst = reduce_binpacking(bp)
                    if cap > smallest and inst.profile.max_part_size > 12:
                        continue
                    checked += 1
                    mismatches += oracle_solve(inst).feasible != binpacking_feasible(bp)
    ROUND_TRIP_SECONDS["a"] = elapsed = time.perf_counter() - t0
    assert record("4a bin packing round trip", mismatches == 0,
                  f"{checked} instances, {mismatches} mismatches, {elapsed:.1f}s")


def small_graphs():
    """All graphs on at most six vertices, up to isomorphism."""
    return [g for g in nx.graph_atlas_g() if g.number_of_nodes() <= 6]


def clique_round_trip(k):
    mismatches = []
    graphs = small_graphs()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i, nxg in enumerate(graphs):
            g = graph_from_edges(nxg.nodes, nxg.edges)
            if oracle_solve(reduce_clique(g, k)).feasible != has_clique(g, k):
                mismatches.append(i)
    return len(graphs), mismatches


def test_4b_clique_round_trip_k4(record):
    t0 = time.perf_counter()
    n, bad = clique_round_trip(4)
    ROUND_TRIP_SECONDS["b4"] = elapsed = time.perf_counter() - t0
    assert record("4b clique round trip, k=4", not bad, f"{n} graphs, {len(bad)} mismatches, {elapsed:.1f}s")


def test_4b_clique_round_trip_k3(record):
    # Expected to fail: at k=3 the target is C(3,2)=3 and the vertex groups have
    # 2 articles, so atomizing the centre of a 3-star already gives its three
    # edge articles 2 + 1 = 3 citations each, without any triangle.
    t0 = time.perf_counter()
    n, bad = clique_round_trip(3)
    ROUND_TRIP_SECONDS["b3"] = elapsed = time.perf_counter() - t0
    assert record("4b clique round trip, k=3", not bad,
                  f"{n} graphs, {len(bad)} mismatches (first: atlas #{bad[0] if bad else '-'}), {elapsed:.1f}s")


def canonical_formula(n, clauses):
    """Smallest image under renaming variables and flipping their signs."""
    best = None
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            image = tuple(sorted(tuple(sorted(signs[abs(x) - 1] * perm[abs(x) - 1] * (1 if x > 0 else -1)
                                              for x in c)) for c in clauses))
            if best is None or image < best:
                best = image
    return best


def formulas(n, m):
    lits = sorted(x for v in range(1, n + 1) for x in (v, -v))
    clauses = list(combinations_with_replacement(lits, 3))
    return sorted({canonical_formula(n, f) for f in combinations_with_replacement(clauses, m)})


def test_4c_3sat_round_trip(record):
    """All formulas with n, m <= 3 and n + m > 3, one per isomorphism class."""
    t0 = time.perf_counter()
    checked = mismatches = 0
    for n, m in [(1, 3), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)]:
        for clauses in formulas(n, m):
            f = CnfFormula(n, clauses)
            inst = reduce_3sat(f)
            sat = satisfiable(f)
            checked += 1
            mismatches += oracle_solve(inst).feasible != sat
            mismatches += solve(inst).feasible != sat
    ROUND_TRIP_SECONDS["c"] = elapsed = time.perf_counter() - t0
    assert record("4c 3-SAT round trip", mismatches == 0,
                  f"{checked} formulas (oracle and FPT solver), {mismatches} mismatches, {elapsed:.1f}s")


def test_4_total_time(record):
    total = sum(ROUND_TRIP_SECONDS.values())
    assert record("4 reductions total time", total < 300, f"{total:.1f}s over {sorted(ROUND_TRIP_SECONDS)}")


# -- 5: scaling ---------------------------------------------------------------------------------
# The linear-time claims are about deciding a fixed h; solve() adds a binary
# search on top, so the decision procedures are timed on index-level parts.

LINEAR = [
    ("atomize", lambda g, p: atomize_refinement(g, p, 5, Measure.UNION)),
    ("atomize-conservative", lambda g, p: atomize_conservative_refinement(g, p, 5, 50, Measure.SUM)),
    ("extract", lambda g, p: extract_refinement(g, p, 5, Measure.UNION)),
    ("extract-cautious", lambda g, p: extract_cautious_refinement(g, p, 5, 50, Measure.UNION)),
    ("extract-conservative", lambda g, p: extract_conservative_refinement(g, p, 5, 50, Measure.SUM)),
]
SIZES = [10_000, 20_000, 40_000, 80_000]


def best_times(fn, args, rounds=15):
    """Per-call minimum over rounds; sizes are interleaved so load spikes hit all of them."""
    best = [float("inf")] * len(args)
    gc.disable()
    try:
        for _ in range(rounds):
            for i, a in enumerate(args):
                reps = max(1, 32 >> i)
                t0 = time.perf_counter()
                for _ in range(reps):
                    fn(*a)
                best[i] = min(best[i], (time.perf_counter() - t0) / reps)
    finally:
        gc.enable()
    return best


def scattered_reads(g, parts):
    # a baseline with the same memory access pattern and no algorithm at all
    citers = g.citers
    return sum(len(citers[u]) for p in parts for v in p for u in citers[v])


def test_5_linear_scaling(record):
    bases = [sparse_random_profile(s // 3, s - s // 3, seed=11) for s in SIZES]
    args = [(b.graph, to_index(b.graph, b.profile.partition)) for b in bases]
    worst_ratio, slowest, lines = 0.0, 0.0, []
    for name, fn in LINEAR:
        times = best_times(fn, args)
        ratios = [b / a for a, b in zip(times, times[1:])]
        worst_ratio = max(worst_ratio, *ratios)
        slowest = max(slowest, times[-1])
        lines.append(f"{name} " + "/".join(f"{r:.2f}" for r in ratios))
    base = best_times(scattered_reads, args)
    lines.append("baseline reads " + "/".join(f"{b / a:.2f}" for a, b in zip(base, base[1:])))
    ok = worst_ratio <= 2.5 and slowest < 5
    assert record("5 linear scaling", ok,
                  f"worst doubling ratio {worst_ratio:.2f}, largest {slowest:.3f}s; " + "; ".join(lines))


# -- 6: experiment sweep ---------------------------------------------------------------------------

SPOT_CHECKS = [
    (0, "0.4", "union", "extracting", "plain", None),
    (7, "0.5", "sum", "dividing", "conservative", 2),
    (13, "0.4", "sum", "atomizing", "conservative", 1),
]


def test_6_experiment_sweep(record, tmp_path, capsys):
    t0 = time.perf_counter()
    out = tmp_path / "sweep.csv"
    args = ["experiment", "--profiles", "20", "--seed", "0", "--sweep-t", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
            "--sweep-k", "0..10", "--out", str(out)]
    assert main(args) == 0
    text = out.read_text()
    again = tmp_path / "again.csv"
    assert main(args[:-1] + [str(again)]) == 0
    rows = read_csv(text)
    problems = sweep_violations(rows)
    spot = []
    by_key = {(r.profile_id, r.threshold, r.measure, r.operation, r.variant, r.k): r for r in rows}
    for key in SPOT_CHECKS:
        row = by_key[key]
        inst = cell_instance(row, seed=0)
        assert count_refinements(inst.profile, inst.operation, inst.variant, inst.k) <= 2_000_000
        spot.append(oracle_solve(inst).achieved_h == row.max_h)
    capsys.readouterr()
    ok = not problems and all(spot) and again.read_text() == text and len({r.profile_id for r in rows}) == 20
    elapsed = time.perf_counter() - t0
    assert record("6 synthetic sweep", ok,
                  f"{len(rows)} rows, {len(problems)} monotonicity violations, spot checks {spot}, "
                  f"byte-identical rerun {again.read_text() == text}, {elapsed:.1f}s")


# -- 7: property suites ---------------------------------------------------------------------------

CASES = 100


def test_7_property_suites(record):
    rng = random.Random(77)
    failures = {}

    def check(name, cond):
        failures.setdefault(name, 0)
        failures[name] += not cond

    for _ in range(CASES):
        inst = random_instance(rng)
        g, p = inst.graph, inst.profile
        s, u, f = (part_citations(g, p, m) for m in ("sum", "union", "fusion"))
        check("measure ordering", all(a >= b >= c for a, b, c in zip(s, u, f)))

        op = rng.choice(list(Operation))
        variant, k = rng.choice([("plain", None), ("conservative", rng.randint(0, 3)),
                                 ("cautious", rng.randint(0, 3))])
        measure = rng.choice(list(Measure))
        problem = inst.with_problem(op, variant, measure, h=rng.randint(0, 3), k=k)
        res = solve(problem)
        witness_ok = res.refinement is None or (
            validate_refinement(problem, res.refinement).valid
            and h_index(g, res.refinement, measure) == res.achieved_h)
        check("refinement validity", witness_ok)

        other = oracle_solve(relabel(problem, rng))
        check("isomorphism invariance", other.achieved_h == oracle_solve(problem).achieved_h)

        sizes = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 5)))
        bins = rng.randint(1, 3)
        cap = max(bins, -(-sum(sizes) // bins)) + rng.randint(0, 2)
        n_vars = rng.randint(1, 3)
        clauses = tuple(tuple(rng.choice([1, -1]) * rng.randint(1, n_vars) for _ in range(3))
                        for _ in range(rng.randint(4 - n_vars, 3)))
        edges = [(a, b) for a in range(5) for b in range(a + 1, 5) if rng.random() < 0.5]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            outputs = [reduce_binpacking(BinPackingInstance(sizes, bins, cap)),
                       reduce_3sat(CnfFormula(n_vars, clauses)),
                       reduce_clique(graph_from_edges(range(5), edges), rng.randint(3, 4))]
        check("reduction acyclicity", all(o.graph.is_acyclic() for o in outputs))

        words = "alpha beta gamma delta eps zeta".split()
        arts = [TitledArticle(f"t{i}", " ".join(rng.sample(words, rng.randint(0, 4)))) for i in range(6)]
        lo, hi = sorted(rng.random() for _ in range(2))
        check("compatibility monotonicity",
              compatibility_graph(arts, hi).edges <= compatibility_graph(arts, lo).edges)

    ok = not any(failures.values())
    assert record("7 property suites", ok,
                  ", ".join(f"{name} {CASES - bad}/{CASES}" for name, bad in failures.items()))
