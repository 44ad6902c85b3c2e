"""
How much can a merged profile gain?
===================================

Synthetic authors with versioned works are merged at several title
similarity thresholds; for each profile the sweep records the best h-index
every operation reaches.
"""

from collections import defaultdict

from hsplit.experiment import run_sweep, sweep_violations, to_csv

rows = run_sweep(n_profiles=6, seed=0, thresholds=["0.2", "0.4", "0.6", "0.8"], ks=[0, 1, 2])
print(to_csv(rows[:8]))
print("monotonicity problems:", sweep_violations(rows))

# mean gain of the unrestricted operations per threshold, union citations
gain = defaultdict(list)
for r in rows:
    if r.variant == "plain" and r.measure == "union":
        gain[r.threshold, r.operation].append(r.delta_h)
for (t, op), d in sorted(gain.items()):
    print(f"t={t} {op:<11} mean gain {sum(d) / len(d):.2f}")
