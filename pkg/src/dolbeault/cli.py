"""Command line entry point.

Exit codes: 0 every suite passed, 1 some suite failed, 2 input error.
Setting ``DOLBEAULT_VERBOSE=1`` prints passing suites' details as well.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from .bundles import as_valued
from .extension import DeformationFamily, ExtensionError, NotClosedError, extend_bundle, extend_nq, extend_scalar
from .forms import Form
from .scenario import (SUITES, ScenarioError, parse_scenario, print_scenario, random_scenario,
                       run_suites)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _input_error(path: str, exc: Exception) -> int:
    print(f"{path}: {exc}", file=sys.stderr)
    return EXIT_INPUT


def cmd_verify(args) -> int:
    try:
        sc = parse_scenario(_read(args.file))
    except (OSError, ScenarioError) as exc:
        return _input_error(args.file, exc)
    try:
        report = run_suites(sc, args.suite)
    except ScenarioError as exc:
        return _input_error(args.file, exc)
    text = report.to_text()
    if not os.environ.get("DOLBEAULT_VERBOSE"):
        text = "\n".join(ln for ln in text.splitlines()
                         if not ln.startswith("      sigma[")) + "\n"
    sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(report.to_json(timings=args.timings), encoding="utf-8")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_random(args) -> int:
    if args.n < 1 or args.r < 1 or args.N < 0 or args.count < 1 or args.deg < 0:
        print("random: n, r, count must be >= 1 and N, deg >= 0", file=sys.stderr)
        return EXIT_INPUT
    seeds = [args.seed + i for i in range(args.count)]
    scenarios = [random_scenario(args.n, args.r, args.N, s, deg=args.deg) for s in seeds]
    if args.verify:
        failed = 0
        for sc in scenarios:
            report = run_suites(sc, args.suite)
            bad = [r.name for r in report.results if r.status == "fail"]
            failed += bool(bad)
            print(f"seed {sc.seed}: " + ("pass" if not bad else "FAIL " + ",".join(bad)))
        print(f"{len(scenarios) - failed}/{len(scenarios)} scenarios passed")
        return EXIT_PASS if not failed else EXIT_FAIL
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for sc in scenarios:
            (out / f"scenario_n{args.n}_r{args.r}_N{args.N}_seed{sc.seed}.json").write_text(
                print_scenario(sc), encoding="utf-8")
        return EXIT_PASS
    if len(scenarios) == 1:
        sys.stdout.write(print_scenario(scenarios[0]))
    else:
        sys.stdout.write(json.dumps([json.loads(print_scenario(sc)) for sc in scenarios], indent=2) + "\n")
    return EXIT_PASS


def cmd_extend(args) -> int:
    try:
        text = _read(args.file)
        sc = parse_scenario(text, N_override=args.order)
    except (OSError, ScenarioError) as exc:
        return _input_error(args.file, exc)
    if args.form not in sc.forms:
        return _input_error(args.file, ScenarioError(f"no form named {args.form!r}"))
    sf = sc.forms[args.form]
    try:
        family = DeformationFamily.from_series(sc.phi, sc.psi)
        if args.nq:
            if sf.word != "":
                raise ValueError("--nq needs a scalar form")
            res = extend_nq(family, sf.value.components.get((), Form.zero(sc.n, sc.N)), sc.N)
        elif sf.word == "E":
            res = extend_bundle(family, sc.conn, sf.value, sc.N)
        else:
            res = extend_scalar(family, sf.value.components.get((), Form.zero(sc.n, sc.N)), sc.N)
    except NotClosedError as exc:
        return _input_error(args.file, exc)
    except ExtensionError as exc:
        print(f"extension failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        return _input_error(args.file, exc)
    for rep in res.orders:
        print(f"order {rep.order}: rhs = {as_valued(rep.rhs)}")
        print(f"         sigma_{rep.order} = {as_valued(rep.solution)}")
    print(f"sigma(t) = {as_valued(res.sigma)}")
    print("residual = 0 through order", sc.N)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dolbeault", description="Exact deformation calculus on a chart.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites on a scenario file")
    v.add_argument("file")
    v.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    v.add_argument("--json", metavar="OUT", help="write a machine-readable report")
    v.add_argument("--timings", action="store_true", help="include timings in the JSON report")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("random", help="generate reproducible geometric scenarios")
    r.add_argument("--n", type=int, default=2)
    r.add_argument("--r", type=int, default=1)
    r.add_argument("--N", type=int, default=2)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--count", type=int, default=1)
    r.add_argument("--deg", type=int, default=2, help="coefficient degree bound")
    r.add_argument("--out", help="directory to write scenario files into")
    r.add_argument("--verify", action="store_true", help="run the suites instead of printing")
    r.add_argument("--suite", action="append", choices=SUITES)
    r.set_defaults(func=cmd_random)

    e = sub.add_parser("extend", help="extend a dbar-closed test form along the family")
    e.add_argument("file")
    e.add_argument("--form", required=True)
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--nq", action="store_true", help="solve the (n,q) obstruction equation")
    e.set_defaults(func=cmd_extend)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    if getattr(args, "order", 0) is not None and getattr(args, "order", 0) < 0:
        print("--order must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
