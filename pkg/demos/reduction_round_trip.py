"""
Hardness constructions, solved back
===================================

Each generator turns a source instance into a splitting instance whose answer
is yes exactly when the source answer is.  Small cases are checked with the
exhaustive oracle.
"""

import warnings

from hsplit import oracle_solve
from hsplit.reductions import (BinPackingInstance, CnfFormula, binpacking_feasible, clique_graph,
                               graph_from_edges, has_clique, reduce_3sat, reduce_binpacking,
                               reduce_clique, satisfiable)

warnings.simplefilter("ignore")

# bin packing -> cautious dividing with sum citations
for bp in [BinPackingInstance((3, 2, 2, 1), 2, 4), BinPackingInstance((3, 3, 2), 2, 4)]:
    inst = reduce_binpacking(bp)
    print(bp, "packable:", binpacking_feasible(bp), " reduced:", oracle_solve(inst).feasible,
          f" ({inst.n} articles, h={inst.h}, k={inst.k})")

# 3-SAT -> atomizing with fusion citations
for f in [CnfFormula(2, ((1, -2, -2), (-1, 2, 2))), CnfFormula(3, ((1, 1, 1), (-1, -1, -1)))]:
    inst = reduce_3sat(f)
    print(f.clauses, "satisfiable:", satisfiable(f), " reduced:", oracle_solve(inst).feasible,
          f" ({inst.n} articles)")

# clique -> conservative atomizing
k4 = clique_graph(4)
missing = graph_from_edges(range(1, 5), [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
for g in (k4, missing):
    inst = reduce_clique(g, 4)
    print(len(g.edges), "edges, 4-clique:", has_clique(g, 4), " reduced:", oracle_solve(inst).feasible)

# at clique size 3 the construction is too weak: a star already reaches h
star = graph_from_edges("cabd", ["ca", "cb", "cd"])
print("3-star, triangle:", has_clique(star, 3), " reduced:", oracle_solve(reduce_clique(star, 3)).feasible)
