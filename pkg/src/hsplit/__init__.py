"""Exact algorithms for raising an h-index by splitting merged articles."""

from importlib.resources import files

from .graph import (CitationGraph, FormatError, InstanceError, Measure, Operation, ProblemInstance,
                    Profile, Refinement, UndirectedGraph, ValidityReport, Variant, format_refinement,
                    parse_instance, parse_refinement, serialize_instance, validate_refinement)
from .measures import citations, h_index, part_citations
from .oracle import count_refinements, enumerate_refinements, oracle_solve
from .result import DEFAULT_LIMITS, BoundExceeded, Limits, SolveResult
from .solvers import (atomize_conservative_solve, atomize_fusion_solve, atomize_solve,
                      divide_conservative_solve, divide_solve, extract_cautious_solve,
                      extract_conservative_solve, extract_solve, merge_subroutine, solve, solver_for)


def load_example(name: str) -> ProblemInstance:
    """Bundled instance: ``"merge_example"`` or ``"split_example"``."""
    return parse_instance(files(__name__).joinpath("data", f"{name}.inst").read_text())


__all__ = [
    "CitationGraph", "FormatError", "InstanceError", "Measure", "Operation", "ProblemInstance",
    "Profile", "Refinement", "UndirectedGraph", "ValidityReport", "Variant", "format_refinement",
    "parse_instance", "parse_refinement", "serialize_instance", "validate_refinement",
    "citations", "h_index", "part_citations",
    "count_refinements", "enumerate_refinements", "oracle_solve",
    "DEFAULT_LIMITS", "BoundExceeded", "Limits", "SolveResult",
    "atomize_conservative_solve", "atomize_fusion_solve", "atomize_solve",
    "divide_conservative_solve", "divide_solve", "extract_cautious_solve",
    "extract_conservative_solve", "extract_solve", "merge_subroutine", "solve", "solver_for",
    "load_example",
]
