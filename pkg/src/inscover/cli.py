"""Command-line interface.

Exit codes: 0 success or verified, 1 verification failed (witness printed),
2 usage error, 3 time budget exhausted (best known solution printed).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import bounds as bnd
from . import constructions as cons
from . import diagnostics as diag
from . import formats
from .cover import ResourceLimitError, build_incidence, greedy_cover, verify_cover, verify_turan
from .solvers import (BEST_KNOWN, PROVED_OPTIMAL, BudgetExhausted, InfeasibleError, SolveResult, default_workers,
                      enumerate_optimal, is_packing, max_packing, min_cover, min_turan, root_lower_bound)
from .words import Code, symmetrize

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        formats.write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _rows(sol) -> list[list[int]]:
    if isinstance(sol, Code):
        return [list(w) for w in sorted(sol.words)]
    if hasattr(sol, "sets"):
        return [list(s) for s in sorted(sol.sets)]
    return [list(w) for w in sol]


# --- solve -----------------------------------------------------------------

def cmd_solve(args) -> int:
    workers = args.threads or default_workers()
    problem = args.problem
    if problem == "packing":
        if args.k is not None and args.k != args.r + 1:
            raise UsageError("packing is defined for k = r + 1")
        k = args.r + 1
    else:
        if args.k is None:
            raise UsageError("--k is required")
        k = args.k
    if args.all_optimal and problem != "cover":
        raise UsageError("--all-optimal is only available for covering codes")
    params = {"problem": problem, "n": args.n, "k": k, "r": args.r}

    classes = None
    if problem == "packing":
        res = max_packing(args.n, args.r, args.time_limit)
        text = formats.format_rows(formats.Header(args.n, k, args.r), res.solution)
    elif args.greedy:
        inst = build_incidence(args.n, k, args.r, "sequence" if problem == "cover" else "turan")
        sol = greedy_cover(inst)
        lb = root_lower_bound(inst)
        res = SolveResult(len(sol), sol, PROVED_OPTIMAL if len(sol) == lb else BEST_KNOWN, lb, len(sol),
                          "greedy; lower bound from counting", {"nodes": 0, "elapsed": 0.0, "workers": 1})
        text = formats.format_code(sol, k) if problem == "cover" else formats.format_system(sol, k)
    elif problem == "cover":
        res = min_cover(args.n, k, args.r, args.time_limit, workers)
        text = formats.format_code(res.solution, k)
        if args.all_optimal and res.proved_optimal:
            classes = enumerate_optimal(args.n, k, args.r, reversal=args.reversal,
                                        time_budget=args.time_limit, workers=workers)
    else:
        res = min_turan(args.n, k, args.r, args.time_limit, workers)
        text = formats.format_system(res.solution, k)

    if args.out:
        formats.write_text(args.out, text)
    if args.json:
        doc = {
            "params": params,
            "optimum": res.optimum,
            "status": res.status,
            "solution": _rows(res.solution),
            "certificate": {"lower_bound": res.lower_bound, "upper_bound": res.upper_bound,
                            "note": res.certificate},
            "stats": res.stats,
        }
        if classes is not None:
            doc["classes"] = [_rows(c) for c in classes]
        print(json.dumps(doc, indent=2))
    else:
        sym = {"cover": "S", "turan": "T", "packing": "P"}[problem]
        print(f"{sym}({args.n},{k},{args.r}) = {res.optimum}  [{res.status}]")
        print(f"certificate: {res.certificate}")
        print(f"nodes: {res.stats.get('nodes')}  elapsed: {res.stats.get('elapsed', 0):.3f}s")
        if not args.out:
            sys.stdout.write(text)
        if classes is not None:
            group = "symbol renaming and reversal" if args.reversal else "symbol renaming"
            print(f"optimal classes under {group}: {len(classes)}")
            for i, c in enumerate(classes):
                print(f"class {i}: " + " ".join("".join(map(str, w)) for w in sorted(c.words)))
    return EXIT_OK if res.proved_optimal else EXIT_BUDGET


# --- verify ----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.kind == "cover":
        code, head = formats.read_code(args.file)
        k = args.k or head.k
        res = verify_cover(code, k)
        label = f"code of size {len(code)} over [{code.n}]^{code.r}, k={k}"
    elif args.kind == "turan":
        system, head = formats.read_system(args.file)
        k = args.k or head.k
        res = verify_turan(system, k)
        label = f"system of size {len(system)}, (n,k,r)=({system.n},{k},{system.r})"
    else:
        words, head = formats.read_packing(args.file)
        ok = is_packing(words, head.r)
        print(f"packing of size {len(words)}: {'valid' if ok else 'INVALID'}")
        return EXIT_OK if ok else EXIT_FAILED
    if res.covered:
        print(f"covered: {label}")
        return EXIT_OK
    print(f"NOT covered: {label}")
    print("witness: " + " ".join(map(str, res.witness)))
    return EXIT_FAILED


# --- construct ---------------------------------------------------------------

def cmd_construct(args) -> int:
    what = args.what
    if what in ("mantel", "turan43", "half-cube") and args.n is None:
        raise UsageError(f"construct {what} needs --n")
    if what == "mantel":
        _emit(args, formats.format_system(cons.mantel_system(args.n), 3))
    elif what == "turan43":
        _emit(args, formats.format_system(cons.turan43_system(args.n), 4))
    elif what == "half-cube":
        _emit(args, formats.format_code(cons.half_cube_code(args.n), 3))
    elif what in ("lift", "random-lift", "symmetrize", "turan-to-code", "code-to-turan"):
        if not args.file:
            raise UsageError(f"construct {what} needs an input FILE")
        if what == "turan-to-code":
            system, head = formats.read_system(args.file)
            _emit(args, formats.format_code(cons.turan_to_code(system, head.k), head.k))
            return EXIT_OK
        code, head = formats.read_code(args.file)
        if what == "lift":
            if args.map:
                table = tuple(int(x) for x in args.map.split())
                f = cons.SymbolMap(len(table), code.n, table)
                out = cons.preimage_code(code, f)
            else:
                if args.m is None:
                    raise UsageError("construct lift needs --m or --map")
                out = cons.mod_lift(code, args.m)
            _emit(args, formats.format_code(out, head.k))
        elif what == "random-lift":
            if args.seed is None or args.n is None:
                raise UsageError("construct random-lift needs --n and --seed")
            lifted = cons.random_lift(code, args.n, args.seed)
            print("map: " + " ".join(map(str, lifted.symbol_map.table)), file=sys.stderr)
            _emit(args, formats.format_code(lifted.code, head.k))
        elif what == "symmetrize":
            _emit(args, formats.format_code(symmetrize(code), head.k))
        else:
            k = args.k or head.k
            _emit(args, formats.format_system(cons.code_to_turan(code, k), k))
    return EXIT_OK


# --- bounds ----------------------------------------------------------------

def cmd_bounds(args) -> int:
    known = {r: args.t_lower for r in args.r} if args.t_lower is not None else {}
    reports = bnd.bounds_table(args.r, known, args.n)
    if args.json:
        print(json.dumps([rep.as_dict() for rep in reports], indent=2))
    else:
        for rep in reports:
            print(f"r={rep.r}" + (f" n={rep.n}" if rep.n is not None else ""))
            for b in rep.lower_bounds:
                print(f"  lower  {b.name:<16} {b.value:.7f}  {b.note}")
            for b in rep.upper_bounds:
                tag = "" if b.unconditional else "  [conditional] "
                print(f"  upper  {b.name:<16} {b.value:.7f}  {tag}{b.note}")
            for name, v in rep.size_lower_bounds:
                print(f"  S(n,r+1,r) >= {v}  ({name})")
            print(f"  consistent: {rep.consistent()}")
    return EXIT_OK if all(rep.consistent() for rep in reports) else EXIT_FAILED


# --- diagnose ----------------------------------------------------------------

def cmd_diagnose(args) -> int:
    if args.what == "bonferroni":
        if args.seed is None:
            raise UsageError("diagnose bonferroni needs --seed")
        rep = diag.fuzz_bonferroni(args.trials, args.seed, star=args.star, raise_on_violation=False)
        kind = "star-strengthened" if args.star else "tree"
        print(f"{kind} inequality: {rep.trials} trials, {len(rep.violations)} violations")
        for case in rep.violations[:5]:
            print(f"  violation: {case!r}")
        return EXIT_OK if rep.ok else EXIT_FAILED
    if not args.file:
        raise UsageError(f"diagnose {args.what} needs an input FILE")
    code, _ = formats.read_code(args.file)
    if args.what == "intersections":
        res = diag.check_pairwise_intersections(code, args.pairs)
        print(f"density^2 = {res.density_squared}  min ratio = {res.min_ratio}")
        print("holds" if res.holds else f"fails for pairs {list(res.failures)}")
        return EXIT_OK if res.holds else EXIT_FAILED
    try:
        p = diag.atom_profile(code)
    except diag.NotCoveringError as exc:
        print(f"NOT covered; witness: {' '.join(map(str, exc.witness))}")
        return EXIT_FAILED
    res = diag.check_residue_bound(p)
    print(f"density      {p.density}")
    print(f"kernel       {p.kernel}")
    print("petals       " + " ".join(str(x) for x in p.petals))
    print(f"residue      {p.residue}")
    print("residue_j    " + " ".join(str(x) for x in p.residue_complements))
    print("multiplicity " + " ".join(f"{t}:{c}" for t, c in p.histogram.items()))
    print(f"residue bound: {p.residue} <= {res.rhs}  {'holds' if res.holds else 'FAILS'}")
    per_j = diag.check_residue_complement_bounds(p)
    print("per-position residue bounds: " + " ".join("ok" if x.holds else "fails" for x in per_j))
    return EXIT_OK if res.holds else EXIT_FAILED


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inscover", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="exact or greedy optimisation")
    s.add_argument("problem", choices=["cover", "turan", "packing"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--r", type=int, required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--greedy", action="store_true")
    s.add_argument("--all-optimal", action="store_true")
    s.add_argument("--reversal", action="store_true", help="also identify codes up to word reversal")
    s.add_argument("--time-limit", type=float, default=300.0)
    s.add_argument("--threads", type=int)
    s.add_argument("--out")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a code or system file")
    v.add_argument("kind", choices=["cover", "turan", "packing"])
    v.add_argument("file")
    v.add_argument("--k", type=int)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", help="build or transform codes and systems")
    c.add_argument("what", choices=["lift", "random-lift", "turan-to-code", "code-to-turan",
                                    "symmetrize", "mantel", "turan43", "half-cube"])
    c.add_argument("file", nargs="?")
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--map")
    c.add_argument("--seed", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    b = sub.add_parser("bounds", help="bound table for s(r+1, r)")
    b.add_argument("--r", type=int, nargs="+", required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--t-lower", type=float)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    d = sub.add_parser("diagnose", help="exact inequality diagnostics")
    d.add_argument("what", choices=["atoms", "bonferroni", "intersections"])
    d.add_argument("file", nargs="?")
    d.add_argument("--trials", type=int, default=10_000)
    d.add_argument("--seed", type=int)
    d.add_argument("--star", action="store_true")
    d.add_argument("--pairs", choices=["all", "adjacent"], default="all")
    d.set_defaults(func=cmd_diagnose)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, formats.FormatError, ResourceLimitError, InfeasibleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cons.ConstructionError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print("witness: " + " ".join(map(str, exc.witness)))
        return EXIT_FAILED
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
