"""Command line entry point: ``absolver solve|corpus|compendium|validate|kb``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import CorpusReport, run_corpus
from .emitters import build_compendium, format_text, instance_for, render_svg, to_script
from .errors import AbsolverError
from .kb import check_kb, load_kb, shipped_kb
from .plan import Plan, Problem
from .solver import MAX_STEPS, TIME_LIMIT, classify
from .validator import validate

EXIT = {"solved": 0, "unsolved": 2, "budget_exhausted": 2, "redundant": 3, "locus_dependent": 4}


def _kb(args):
    kb = load_kb(args.kb) if args.kb else shipped_kb(args.geometry)
    if kb.geometry and kb.geometry != args.geometry:
        raise AbsolverError(f"{args.kb} is a {kb.geometry} knowledge base")
    return kb


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    problem = Problem.parse(args.points, args.geometry)
    outcome = classify(problem, _kb(args), args.max_steps, args.time_limit)
    plan = outcome.plan
    if args.out == "json":
        d = {"problem": list(problem.given), "geometry": problem.geometry,
             "status": outcome.status, "plan": plan.to_dict() if plan else None}
        for key in ("witness", "constraint", "reason"):
            if hasattr(outcome, key):
                d[key] = getattr(outcome, key)
        _write(json.dumps(d, indent=2, sort_keys=True, ensure_ascii=False) + "\n", args.output)
    elif outcome.status != "solved":
        msg = {"redundant": getattr(outcome, "witness", ""),
               "locus_dependent": getattr(outcome, "constraint", ""),
               "unsolved": getattr(outcome, "reason", "")}[outcome.status]
        _write(f"{problem} ({problem.geometry}): {outcome.status}: {msg}\n", args.output)
    elif args.out == "text":
        _write(format_text(plan), args.output)
    elif args.out == "script":
        _write(to_script(plan), args.output)
    else:
        _write(render_svg(plan, instance_for(plan, args.seed)).svg, args.output)
    if outcome.status == "unsolved" and "exhausted" in getattr(outcome, "reason", ""):
        return EXIT["budget_exhausted"]
    return EXIT[outcome.status]


def cmd_corpus(args) -> int:
    kb = _kb(args)
    report = run_corpus(kb, args.geometry, args.max_steps, args.time_limit, jobs=args.jobs,
                        trials=args.trials, seed=args.seed)
    Path(args.report).write_text(report.to_json(timings=args.timings), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    totals = ", ".join(f"{k} {v}" for k, v in report.totals.items())
    print(f"{args.geometry}: {len(report.entries)} problems; {totals}")
    return 0


def cmd_compendium(args) -> int:
    report = CorpusReport.from_json(Path(args.report).read_text(encoding="utf-8"))
    files = build_compendium(report, args.out)
    print(f"wrote {len(files)} pages to {args.out}")
    return 0


def cmd_validate(args) -> int:
    data = json.loads(Path(args.plan).read_text(encoding="utf-8"))
    if "version" not in data and isinstance(data.get("plan"), dict):
        data = data["plan"]  # output of ``solve --out json``
    plan = Plan.from_dict(data)
    report = validate(plan, args.trials, args.seed, args.tol)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    print(f"{report.passes}/{report.evaluated} trials passed "
          f"({report.filtered} excluded by non-degeneracy), pass rate {report.pass_rate:.4f}")
    return 0 if report.pass_rate >= 0.99 else 1


def cmd_kb_check(args) -> int:
    kb = load_kb(args.file)
    problems = check_kb(kb)
    for p in problems:
        print(p)
    if not problems:
        kinds = {}
        for r in kb.rules:
            kinds[r.sort] = kinds.get(r.sort, 0) + 1
        summary = ", ".join(f"{v} {k}s" for k, v in sorted(kinds.items()))
        print(f"{args.file}: ok ({summary}; digest {kb.digest()})")
    return 1 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="absolver", description="Triangle construction solver.")
    sub = p.add_subparsers(dest="command", required=True)

    def search_opts(sp):
        sp.add_argument("--geometry", required=True, choices=("euclidean", "hyperbolic"))
        sp.add_argument("--kb", help="knowledge base file instead of the shipped one")
        sp.add_argument("--max-steps", type=int, default=MAX_STEPS)
        sp.add_argument("--time-limit", type=float, default=TIME_LIMIT)
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="solve one problem")
    search_opts(s)
    s.add_argument("--points", required=True, help="three labels, e.g. A,O,G")
    s.add_argument("--out", choices=("text", "json", "script", "svg"), default="text")
    s.add_argument("--output", "-o", help="write here instead of stdout")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("corpus", help="classify every problem of the corpus")
    search_opts(c)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--report", required=True)
    c.add_argument("--csv")
    c.add_argument("--trials", type=int, default=100, help="validation trials per solved problem")
    c.add_argument("--timings", action="store_true", help="record runtimes (not reproducible)")
    c.set_defaults(func=cmd_corpus)

    m = sub.add_parser("compendium", help="static HTML site from a corpus report")
    m.add_argument("--report", required=True)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_compendium)

    v = sub.add_parser("validate", help="check a plan numerically")
    v.add_argument("--plan", required=True)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--json")
    v.set_defaults(func=cmd_validate)

    k = sub.add_parser("kb", help="knowledge base tools")
    ksub = k.add_subparsers(dest="kb_command", required=True)
    kc = ksub.add_parser("check", help="parse and check a knowledge base file")
    kc.add_argument("file")
    kc.set_defaults(func=cmd_kb_check)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # usage errors exit 1 so that 2 keeps meaning "unsolved"
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except (AbsolverError, OSError, ValueError) as e:
        print(f"absolver: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
