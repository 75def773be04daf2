"""Command line: ``run``, ``list-checks`` and ``validate``.

Exit status: 0 when every check passes, 1 on a check failure, 2 on a
configuration or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import REGISTRY
from .runner import render, run_scenario
from .scenario import ScenarioError, corpus_paths, load_scenario


def _cap(text: str) -> int | None:
    if text.lower() in ("none", "off"):
        return None
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("degree cap must be non-negative")
    return value


def _expand(paths: list[str], corpus: bool) -> list[Path]:
    out: list[Path] = list(corpus_paths()) if corpus else []
    for p in paths:
        path = Path(p)
        out.extend(sorted(path.glob("*.yaml")) if path.is_dir() else [path])
    return out


def _load(path: Path, args) -> object:
    sc = load_scenario(path)
    if args.seed is not None:
        sc.seed = args.seed
    if args.samples is not None:
        if args.samples < 1:
            raise ScenarioError("--samples must be at least 1")
        sc.samples = args.samples
    if args.degree_cap is not False:
        sc.degree_cap = args.degree_cap
    return sc


def cmd_run(args) -> int:
    paths = _expand(args.scenarios, args.corpus)
    if not paths:
        print("error: no scenario given", file=sys.stderr)
        return 2
    try:
        scenarios = [_load(p, args) for p in paths]
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reports = [run_scenario(sc, jobs=args.jobs) for sc in scenarios]
    text = render([r.to_record(args.timings) for r in reports], args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return max(r.exit_code for r in reports)


def cmd_validate(args) -> int:
    paths = _expand(args.scenarios, args.corpus)
    if not paths:
        print("error: no scenario given", file=sys.stderr)
        return 2
    status = 0
    for p in paths:
        try:
            sc = load_scenario(p)
        except ScenarioError as exc:
            print(f"invalid: {exc}")
            status = 2
            continue
        k = len(sc.checks)
        print(f"ok: {sc.name} ({k} check{'' if k == 1 else 's'}, {sc.alg.name or 'custom'} algebra, d = {sc.d})")
    return status


def cmd_list(args) -> int:
    if args.format == "json":
        rows = [{"name": c.name, "module": c.module, "anchor": c.anchor} for c in REGISTRY.values()]
        print(json.dumps(rows, indent=2, ensure_ascii=False))
        return 0
    width = max(len(n) for n in REGISTRY)
    for c in REGISTRY.values():
        print(f"{c.name:<{width}}  {c.module:<12}  {c.anchor}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algebroids", description="Exact checks for transitive Lie algebroid calculi.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="format", action="store_const", const="json")
        g.add_argument("--text", dest="format", action="store_const", const="text")
        p.set_defaults(format="text")

    run = sub.add_parser("run", help="run the checks named in scenario files")
    run.add_argument("scenarios", nargs="*", help="scenario files or directories")
    run.add_argument("--corpus", action="store_true", help="include every shipped scenario")
    run.add_argument("--seed", type=int)
    run.add_argument("--samples", type=int)
    run.add_argument("--degree-cap", type=_cap, default=False, help="integer, or 'none' to disable")
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--timings", action="store_true", help="add per-check elapsed time (breaks byte identity)")
    run.add_argument("-o", "--output")
    fmt(run)
    run.set_defaults(func=cmd_run)

    val = sub.add_parser("validate", help="parse and validate scenario files without running checks")
    val.add_argument("scenarios", nargs="*")
    val.add_argument("--corpus", action="store_true")
    val.set_defaults(func=cmd_validate)

    ls = sub.add_parser("list-checks", help="list registered checks with their anchors")
    fmt(ls)
    ls.set_defaults(func=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
