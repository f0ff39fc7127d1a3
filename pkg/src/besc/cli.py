"""Command-line entry point.

Exit codes: 0 success or witness found, 2 no witness, 3 input or usage
error, 4 a proven identity or bound failed (internal error).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bowtie as bt
from .config_search import (
    SearchBudget,
    component_guided_search,
    exhaustive_search,
)
from .pipeline import (
    BadEps,
    BadK,
    compute_thresholds,
    density_sweep,
    identity_checks,
    sweep_csv,
    theorem_pipeline,
)
from .triple_system import (
    TripleSystemError,
    as_fraction,
    dilute,
    generate_random_linear,
    generate_steiner,
    load,
    serialize,
)

EXIT_OK = 0
EXIT_NO_WITNESS = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _rational(text: str):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget_nodes, args.budget_ms)


def cmd_gen(args) -> int:
    if args.kind == "steiner":
        H = generate_steiner(args.n)
    else:
        if args.density is None:
            raise TripleSystemError("gen random needs --density")
        H = generate_random_linear(args.n, args.density, args.seed)
    if args.dilute is not None:
        H = dilute(H, args.dilute, args.seed)
    _emit(serialize(H), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    H = load(args.file)
    checks = identity_checks(H)[3]
    failed = [c for c in checks if c.applicable and not c.holds]
    for c in checks:
        mark = "ok  " if c.holds else "FAIL"
        print(f"{mark} {c.name}: {c.to_json()['lhs']} {c.relation} {c.to_json()['rhs']}")
    return EXIT_INTERNAL if failed else EXIT_OK


def cmd_analyze(args) -> int:
    H = load(args.file)
    rep = theorem_pipeline(
        H, args.k, args.component_bound, _budget(args), eps=args.eps, timings=args.timings
    )
    _emit(_json(rep.to_json()), args.out)
    if not rep.ok:
        for c in rep.failures:
            print(f"identity violated: {c.name}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_search(args) -> int:
    H = load(args.file)
    s = args.k + 3 if args.s is None else args.s
    budget = _budget(args)
    if args.method == "exhaustive":
        res = exhaustive_search(H, args.k, s, budget)
    else:
        if s < args.k + 3:
            raise TripleSystemError("greedy search only produces (k+3,k)-configurations; use --s >= k+3")
        B = bt.build_bowtie(H)
        res = None
        for comp in bt.components(B):
            if comp.edges == 0:
                continue
            res = component_guided_search(H, B, comp, args.k, budget)
            if res.found:
                break
    if res is None or not res.found:
        status = "no_seeds" if res is None else res.status.value
        print(json.dumps({"k": args.k, "s": s, "status": status}), file=sys.stderr)
        return EXIT_NO_WITNESS
    _emit(_json(res.config.to_json(s=s)), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = density_sweep(
        args.n,
        args.k,
        args.grid,
        args.trials,
        args.seed,
        args.component_bound,
        _budget(args),
        workers=args.workers,
        timings=args.timings,
    )
    _emit(sweep_csv(rows), args.out)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    _emit(_json(compute_thresholds(args.eps, args.k).to_json()), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="besc", description="Linear triple systems, bow-tie graphs and (k+3,k)-configurations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, budget=False, seed=False):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write output here instead of stdout")
        if budget:
            sp.add_argument("--budget-nodes", type=int, default=None)
            sp.add_argument("--budget-ms", type=int, default=None)
            sp.add_argument("--component-bound", type=int, default=None)

    g = sub.add_parser("gen", help="generate a .l3g file")
    g.add_argument("kind", choices=["steiner", "random"])
    g.add_argument("n", type=int)
    g.add_argument("--density", type=_rational, help="target density for random systems")
    g.add_argument("--dilute", type=_rational, help="dilute the result to this density")
    common(g, seed=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check every identity on a .l3g file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="run the full pipeline and write a JSON report")
    a.add_argument("file")
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--eps", type=_rational, default=None)
    a.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    common(a, budget=True)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("search", help="look for an (s,k)-configuration")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--s", type=int, default=None, help="span limit, default k+3")
    s.add_argument("--method", choices=["greedy", "exhaustive"], default="greedy")
    common(s, budget=True)
    s.set_defaults(func=cmd_search)

    w = sub.add_parser("sweep", help="density sweep over diluted Steiner systems, CSV output")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--k", type=int, required=True)
    w.add_argument("--grid", type=lambda t: [_rational(x) for x in t.split(",")], required=True)
    w.add_argument("--trials", type=int, default=1)
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--timings", action="store_true", help="fill elapsed_ms (not reproducible)")
    common(w, budget=True, seed=True)
    w.set_defaults(func=cmd_sweep)

    t = sub.add_parser("thresholds", help="print n1, n3 and the log-scale constants")
    t.add_argument("--eps", type=_rational, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--out")
    t.set_defaults(func=cmd_thresholds)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except bt.InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (TripleSystemError, BadEps, BadK, bt.DegenerateDensity, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
