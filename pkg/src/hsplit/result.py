from __future__ import annotations

from dataclasses import dataclass

from .graph import Refinement


class BoundExceeded(RuntimeError):
    """An exhaustive step would exceed its configured size limit."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: {size} exceeds the configured limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


@dataclass(frozen=True)
class Limits:
    # articles in one exhaustive set-partition search
    partition_elements: int = 12
    # merged articles in one subset brute force
    subset_parts: int = 24
    # refinements the oracle may enumerate
    oracle_refinements: int = 2_000_000


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a solver.

    ``achieved_h`` is the largest h-index reachable under the instance's
    constraints. ``refinement`` witnesses it and is present iff ``feasible``,
    i.e. iff ``achieved_h`` reaches the instance's target.
    """

    feasible: bool
    refinement: Refinement | None
    achieved_h: int
    operations_used: int = 0
    parts_changed: int = 0
    solver: str = ""
