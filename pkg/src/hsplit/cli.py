"""Command-line front end: ``hsplit solve|oracle|reduce|gen|experiment``.

Exit status: 0 on success, 1 when ``--expect-feasible`` is given and the
instance is infeasible, 2 on usage or input-format errors, 3 when an
exhaustive step exceeds its size limit.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .experiment import run_sweep, to_csv
from .graph import (InstanceError, Measure, Operation, ProblemInstance, Variant, format_refinement,
                    parse_instance, serialize_instance)
from .oracle import oracle_solve
from .profiles import merged_profile, read_titles, synthetic_author
from .reductions import (BinPackingInstance, parse_binpacking, parse_dimacs, parse_edgelist,
                         reduce_binpacking, reduce_3sat, reduce_clique)
from .result import BoundExceeded, SolveResult
from .solvers import solve

EXIT_INFEASIBLE, EXIT_USAGE, EXIT_BOUND = 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _k_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        lo_i, hi_i = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None
    if lo_i < 0 or hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"empty or negative budget range {text!r}")
    return list(range(lo_i, hi_i + 1))


def _thresholds(text: str) -> list[str]:
    out = []
    for t in text.split(","):
        t = t.strip()
        try:
            ok = 0 <= float(t) <= 1
        except ValueError:
            ok = False
        if not ok:
            raise argparse.ArgumentTypeError(f"threshold {t!r} is not a number in [0, 1]")
        out.append(t)
    return out


def _add_problem_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", choices=[o.value for o in Operation])
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--measure", choices=[m.value for m in Measure])
    p.add_argument("--h", type=int)
    p.add_argument("--k", type=int)


def _override(inst: ProblemInstance, args) -> ProblemInstance:
    variant = Variant(args.variant) if args.variant else inst.variant
    k = args.k if args.k is not None else inst.k
    if variant is not Variant.PLAIN and k is None:
        raise UsageError(f"variant {variant.value} needs --k")
    if variant is Variant.PLAIN and args.k is not None:
        raise UsageError("--k only applies to conservative/cautious variants")
    if (args.h is not None and args.h < 0) or (k is not None and k < 0):
        raise UsageError("--h and --k must be non-negative")
    return inst.with_problem(args.problem, variant, args.measure, args.h, k)


def _report(inst: ProblemInstance, res: SolveResult, args) -> int:
    lines = [
        f"feasible {'yes' if res.feasible else 'no'}",
        f"operations_used {res.operations_used}",
        f"parts_changed {res.parts_changed}",
        f"solver {res.solver}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if res.feasible:
        text = format_refinement(inst.graph, res.refinement, res.achieved_h)
        sys.stdout.write(text)
        if args.out:
            _write(args.out, text)
    else:
        sys.stdout.write(f"hindex {res.achieved_h}\n")
    if args.expect_feasible and not res.feasible:
        return EXIT_INFEASIBLE
    return 0


def cmd_solve(args) -> int:
    inst = _override(parse_instance(_read(args.inp)), args)
    res = oracle_solve(inst) if args.command == "oracle" else solve(inst)
    return _report(inst, res, args)


def cmd_reduce(args) -> int:
    if args.source == "binpacking":
        if args.inp:
            bp = parse_binpacking(_read(args.inp))
        elif args.sizes is None or args.bins is None or args.capacity is None:
            raise UsageError("binpacking needs --in or all of --sizes, --bins, --capacity")
        else:
            bp = BinPackingInstance(tuple(args.sizes), args.bins, args.capacity)
        inst = reduce_binpacking(bp)
    elif args.source == "3sat":
        if not args.inp:
            raise UsageError("3sat needs --in <dimacs file>")
        inst = reduce_3sat(parse_dimacs(_read(args.inp)))
    else:
        if not args.inp or args.k is None:
            raise UsageError("clique needs --in <edge list> and --k")
        inst = reduce_clique(parse_edgelist(_read(args.inp)), args.k,
                             args.problem or Operation.ATOMIZING, args.variant or Variant.CONSERVATIVE)
    _write(args.out, serialize_instance(inst))
    return 0


def cmd_gen(args) -> int:
    if args.inp:
        if not args.titles:
            raise UsageError("gen --in needs --titles")
        base = parse_instance(_read(args.inp))
        titled = read_titles(_read(args.titles))
        missing = base.profile.owned - {a.id for a in titled}
        if missing:
            raise UsageError(f"no title for owned article(s) {sorted(missing)}")
        graph = base.graph
        profile = merged_profile(graph, titled, args.threshold)
    else:
        author = synthetic_author(args.seed)
        graph, profile = author.graph, author.profile(args.threshold)
    inst = ProblemInstance(graph, profile, measure=Measure(args.measure), h=args.h)
    _write(args.out, serialize_instance(inst))
    return 0


def cmd_experiment(args) -> int:
    rows = run_sweep(args.profiles, args.seed, args.sweep_t, args.sweep_k, jobs=args.jobs)
    _write(args.out, to_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsplit", description="h-index manipulation by splitting merged articles")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("solve", "solve with the fastest exact method"),
                           ("oracle", "solve by exhaustive enumeration")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="inp", required=True, help="instance file, '-' for stdin")
        p.add_argument("--out", help="also write the witness refinement here")
        p.add_argument("--expect-feasible", action="store_true", help="exit 1 if infeasible")
        _add_problem_flags(p)
        p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="build an instance from a hard source problem")
    p.add_argument("source", choices=["binpacking", "3sat", "clique"])
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--sizes", type=_int_list)
    p.add_argument("--bins", type=int)
    p.add_argument("--capacity", type=int)
    p.add_argument("--k", type=int, help="clique size")
    p.add_argument("--problem", choices=[o.value for o in Operation], help="clique target operation")
    p.add_argument("--variant", choices=["conservative", "cautious"], help="clique target variant")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="merged-profile instance from titles or a synthetic author")
    p.add_argument("--in", dest="inp", help="instance file supplying articles, owned set and arcs")
    p.add_argument("--titles", help="'<id>\\t<title>' lines for the owned articles")
    p.add_argument("--seed", type=int, default=0, help="synthetic author seed (without --in)")
    p.add_argument("--threshold", default="0.4", type=lambda s: _thresholds(s)[0])
    p.add_argument("--measure", choices=[m.value for m in Measure], default="union")
    p.add_argument("--h", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="threshold/budget sweep over synthetic profiles, CSV out")
    p.add_argument("--profiles", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep-t", type=_thresholds, default=_thresholds("0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"))
    p.add_argument("--sweep-k", type=_k_range, default=_k_range("0..5"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except BoundExceeded as e:
        print(f"hsplit: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (UsageError, InstanceError, ValueError) as e:
        print(f"hsplit: {e}", file=sys.stderr)
        return EXIT_USAGE
