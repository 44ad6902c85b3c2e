"""
Citation measures and the three splitting operations
====================================================

Two bundled instances: one where the citation measure matters and one where
the choice of operation does.
"""

from hsplit import load_example, part_citations, solve, oracle_solve, h_index, Operation

# merged articles are counted differently by each measure
inst = load_example("merge_example")
for measure in ("sum", "union", "fusion"):
    counts = part_citations(inst.graph, inst.profile, measure)
    print(measure, dict(zip((",".join(sorted(p)) for p in inst.profile.partition), counts)),
          "h =", h_index(inst.graph, inst.profile, measure))

# one merged article of four versions, each cited from outside
inst = load_example("split_example")
print("\nas merged: h =", h_index(inst.graph, inst.profile, inst.measure))
for op in Operation:
    res = solve(inst.with_problem(op, h=0))
    print(f"{op.value:<11} best h = {res.achieved_h}  solver = {res.solver}")
    print("   parts:", sorted(sorted(p) for p in res.refinement.partition))

# the exhaustive oracle agrees
print("\noracle:", [oracle_solve(inst.with_problem(op, h=0)).achieved_h for op in Operation])

# with a budget: conservative dividing may touch one merged article
res = solve(inst.with_problem(Operation.DIVIDING, "conservative", h=0, k=1))
print("dividing, k=1:", res.achieved_h, "parts changed:", res.parts_changed)
