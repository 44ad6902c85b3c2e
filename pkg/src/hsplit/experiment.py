"""Threshold and budget sweeps over synthetic author profiles.

For every profile, compatibility threshold and measure, the sweep records
the maximum h-index reachable by each operation, unrestricted and under
budgets k, next to the merged profile's own h-index.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, astuple
from typing import Iterable, Sequence

from .graph import Measure, Operation, ProblemInstance, Variant
from .measures import h_index
from .profiles import synthetic_author
from .result import DEFAULT_LIMITS, Limits
from .solvers import solve

COLUMNS = ("profile_id", "threshold", "measure", "operation", "variant", "k",
           "base_h", "max_h", "delta_h")

_MEASURES = (Measure.SUM, Measure.UNION)
_OPS = (Operation.ATOMIZING, Operation.EXTRACTING, Operation.DIVIDING)
_VARIANT_ORDER = {Variant.PLAIN: 0, Variant.CONSERVATIVE: 1, Variant.CAUTIOUS: 2}


@dataclass(frozen=True, order=True)
class Row:
    profile_id: int
    threshold: str
    measure: str
    operation: str
    variant: str
    k: int | None
    base_h: int
    max_h: int

    @property
    def delta_h(self) -> int:
        return self.max_h - self.base_h

    def sort_key(self):
        return (self.profile_id, float(self.threshold), _MEASURES.index(Measure(self.measure)),
                _OPS.index(Operation(self.operation)), _VARIANT_ORDER[Variant(self.variant)],
                -1 if self.k is None else self.k)

    def as_csv(self) -> list:
        *head, k, base, best = astuple(self)
        return [*head, "" if k is None else k, base, best, self.delta_h]


def cells(ks: Sequence[int]) -> list[tuple[Operation, Variant, int | None]]:
    """Operation/variant/budget combinations with a dedicated exact solver.

    Cautious dividing is left out: only the exhaustive oracle handles it.
    """
    out = [(op, Variant.PLAIN, None) for op in _OPS]
    out += [(op, Variant.CONSERVATIVE, k) for op in _OPS for k in ks]
    out += [(Operation.EXTRACTING, Variant.CAUTIOUS, k) for k in ks]
    return out


def author_for(profile_id: int, seed: int):
    return synthetic_author(seed * 1_000_003 + profile_id)


def cell_instance(row: Row, seed: int) -> ProblemInstance:
    """The instance (with h = 0) whose maximum is reported in ``row``."""
    author = author_for(row.profile_id, seed)
    base = ProblemInstance(author.graph, author.profile(row.threshold))
    return base.with_problem(row.operation, row.variant, row.measure, h=0, k=row.k)


def profile_rows(profile_id: int, seed: int, thresholds: Sequence[str], ks: Sequence[int],
                 limits: Limits = DEFAULT_LIMITS) -> list[Row]:
    author = author_for(profile_id, seed)
    rows = []
    for t in thresholds:
        base = ProblemInstance(author.graph, author.profile(t))
        for measure in _MEASURES:
            base_h = h_index(base.graph, base.profile, measure)
            for op, variant, k in cells(ks):
                inst = base.with_problem(op, variant, measure, h=0, k=k)
                best = solve(inst, limits).achieved_h
                rows.append(Row(profile_id, t, measure.value, op.value, variant.value, k, base_h, best))
    return rows


def run_sweep(n_profiles: int, seed: int, thresholds: Sequence[str], ks: Sequence[int],
              jobs: int = 1, limits: Limits = DEFAULT_LIMITS) -> list[Row]:
    args = [(pid, seed, list(thresholds), list(ks), limits) for pid in range(n_profiles)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            chunks = list(pool.map(profile_rows, *zip(*args)))
    else:
        chunks = [profile_rows(*a) for a in args]
    return sorted((r for chunk in chunks for r in chunk), key=Row.sort_key)


def to_csv(rows: Iterable[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


def read_csv(text: str) -> list[Row]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(Row(int(rec["profile_id"]), rec["threshold"], rec["measure"], rec["operation"],
                        rec["variant"], int(rec["k"]) if rec["k"] else None, int(rec["base_h"]),
                        int(rec["max_h"])))
    return rows


def sweep_violations(rows: Iterable[Row]) -> list[str]:
    """Broken monotonicity: in the budget, and atomizing <= extracting <= dividing."""
    by_cell: dict[tuple, int] = {}
    for r in rows:
        by_cell[(r.profile_id, r.threshold, r.measure, r.operation, r.variant, r.k)] = r.delta_h
    problems = []
    for (pid, t, meas, op, var, k), d in by_cell.items():
        if k is not None:
            prev = by_cell.get((pid, t, meas, op, var, k - 1))
            if prev is not None and prev > d:
                problems.append(f"profile {pid} t={t} {meas} {op} {var}: delta_h drops from k={k - 1} to k={k}")
        for weaker, stronger in zip(_OPS, _OPS[1:]):
            if op != weaker.value:
                continue
            other = by_cell.get((pid, t, meas, stronger.value, var, k))
            if other is not None and other < d:
                problems.append(f"profile {pid} t={t} {meas} {var} k={k}: {op} beats {stronger.value}")
    return problems
