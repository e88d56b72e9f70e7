"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 input/parse, 3 resource, 4 internal
invariant.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import queries
from .convert import to_baseline_sdd
from .frontend import DimacsError, compile_cnf, gen_grid_matching, gen_matching_tree, gen_nqueens, parse_dimacs, to_dimacs
from .manager import NORMALIZED, TRIMMED, InvariantError, VsError
from .oracle import MAX_VARS, OracleLimitError, table_of
from .serialize import DiagramParseError, read_diagram, to_dot, write_diagram
from .vtree import VtreeError, build_balanced, build_right_linear, parse_vtree, serialize_vtree

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RESOURCE, EXIT_INVARIANT = 0, 1, 2, 3, 4

REPORT_FIELDS = ("name", "vars", "S", "V", "ratio", "sdd_nodes", "vs_nodes", "count",
                 "apply_calls", "cache_hits", "cache_misses", "time_vs", "sdd_baseline", "time_sdd", "verified")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_INPUT) from None


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_RESOURCE) from None


def _emit(pairs, porcelain: bool) -> None:
    for key, value in pairs:
        print(f"{key}={value}" if porcelain else f"{key}: {value}")


# ----------------------------------------------------------------------
def cmd_gen(args) -> int:
    kind, param = args.kind, args.param
    try:
        if kind == "queens":
            inst = gen_nqueens(int(param))
        elif kind == "ftree":
            inst = gen_matching_tree(int(param))
        else:
            p, _, q = param.lower().partition("x")
            inst = gen_grid_matching(int(p), int(q))
    except ValueError as exc:
        raise CliError(f"bad generator parameters: {exc}", EXIT_USAGE) from None
    prefix = Path(args.out)
    _write(prefix.with_name(prefix.name + ".cnf"), to_dimacs(inst.cnf, [inst.name]))
    _write(prefix.with_name(prefix.name + ".vtree"), serialize_vtree(inst.vtree))
    print(f"wrote {prefix}.cnf ({inst.cnf.num_vars} vars, {len(inst.cnf.clauses)} clauses) and {prefix}.vtree")
    return EXIT_OK


def _vtree_for(spec: str, num_vars: int):
    if spec == "balanced":
        return build_balanced(max(num_vars, 1))
    if spec == "rightlinear":
        return build_right_linear(max(num_vars, 1))
    try:
        return parse_vtree(_read(spec))
    except VtreeError as exc:
        raise CliError(f"{spec}: {exc}", EXIT_INPUT) from None


def _ratio(v: int, s: int) -> str:
    return "100.0%" if s == 0 else f"{100.0 * v / s:.1f}%"


def cmd_compile(args) -> int:
    try:
        cnf = parse_dimacs(_read(args.cnf))
    except DimacsError as exc:
        raise CliError(f"{args.cnf}: {exc}", EXIT_INPUT) from None
    vtree = _vtree_for(args.vtree, cnf.num_vars)
    try:
        res = compile_cnf(cnf, vtree, mode=args.mode, compress=not args.no_compress)
    except VsError as exc:
        raise CliError(str(exc), EXIT_INPUT) from None
    mgr, f = res.manager, res.handle
    st = res.stats
    S, V = st["sdd_size"], st["size"]
    report = {
        "name": Path(args.cnf).stem,
        "vars": cnf.num_vars,
        "S": S,
        "V": V,
        "ratio": _ratio(V, S),
        "sdd_nodes": mgr.sdd_node_count(f),
        "vs_nodes": sum(1 for s in mgr.reachable(f.structure) if s >= 4),
        "count": queries.count(mgr, f, range(1, min(cnf.num_vars, vtree.M) + 1)),
        "apply_calls": st["apply_calls"],
        "cache_hits": st["cache_hits"],
        "cache_misses": st["cache_misses"],
        "time_vs": f"{st['time']:.4f}",
    }
    if mgr.audit(f):
        raise CliError("identical vtree rule violated: " + "; ".join(mgr.audit(f)[:3]), EXIT_INVARIANT)
    if args.compare_sdd:
        t0 = time.perf_counter()
        base = compile_cnf(cnf, vtree, kind="sdd")
        report["time_sdd"] = f"{time.perf_counter() - t0:.4f}"
        report["sdd_baseline"] = base.stats["size"]
        if args.mode == TRIMMED and not args.no_compress:
            sdd, node = to_baseline_sdd(mgr, f, base.manager)
            if node != base.handle or base.stats["size"] != S:
                raise CliError("VS-SDD and baseline SDD disagree", EXIT_INVARIANT)
    if V > S:
        raise CliError(f"VS-SDD size {V} exceeds SDD size {S}", EXIT_INVARIANT)
    if args.verify:
        if cnf.num_vars > MAX_VARS:
            raise CliError(f"--verify limited to {MAX_VARS} variables", EXIT_RESOURCE)
        try:
            expected = table_of(cnf).count
        except OracleLimitError as exc:
            raise CliError(str(exc), EXIT_RESOURCE) from None
        if expected != report["count"]:
            raise CliError(f"count {report['count']} differs from oracle {expected}", EXIT_INVARIANT)
        report["verified"] = "yes"
    if args.out:
        _write(Path(args.out), write_diagram(mgr, f))
    _emit(((k, report[k]) for k in REPORT_FIELDS if k in report), args.porcelain)
    return EXIT_OK


def _load(path: str, manager=None):
    try:
        return read_diagram(_read(path), manager)
    except DiagramParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def cmd_query(args) -> int:
    mgr, f = _load(args.diagram)
    q = args.query
    if q == "count":
        print(queries.count(mgr, f))
    elif q == "sat":
        print(str(queries.satisfiable(mgr, f)).lower())
    elif q == "valid":
        print(str(queries.valid(mgr, f)).lower())
    elif q in ("equiv", "entails"):
        if not args.other:
            raise CliError(f"{q} needs a second diagram", EXIT_USAGE)
        _, g = _load(args.other, mgr)
        fn = queries.equivalent if q == "equiv" else queries.entails
        print(str(fn(mgr, f, g)).lower())
    else:
        for model in queries.enumerate_models(mgr, f, limit=args.limit):
            print(queries.format_model(model))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    mgr, f = _load(args.diagram)
    sys.stdout.write(to_dot(mgr, f))
    return EXIT_OK


# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vssdd", description="Compile CNFs to variable shift SDDs and query them.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a benchmark CNF and its suggested vtree")
    g.add_argument("kind", choices=["queens", "grid", "ftree"])
    g.add_argument("param", help="N for queens, PxQ for grid, J for ftree")
    g.add_argument("--out", required=True, help="output prefix")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("compile", help="compile a DIMACS CNF and report sizes")
    c.add_argument("--cnf", required=True)
    c.add_argument("--vtree", default="balanced", help="balanced, rightlinear, or a .vtree path")
    c.add_argument("--mode", choices=[TRIMMED, NORMALIZED], default=TRIMMED)
    c.add_argument("--no-compress", action="store_true")
    c.add_argument("--compare-sdd", action="store_true")
    c.add_argument("--verify", action="store_true")
    c.add_argument("--out")
    c.add_argument("--porcelain", action="store_true")
    c.set_defaults(func=cmd_compile)

    q = sub.add_parser("query", help="run a query on a saved diagram")
    q.add_argument("query", choices=["count", "sat", "valid", "equiv", "entails", "enumerate"])
    q.add_argument("other", nargs="?", help="second diagram for equiv/entails")
    q.add_argument("--diagram", required=True)
    q.add_argument("--limit", type=int, default=0)
    q.set_defaults(func=cmd_query)

    d = sub.add_parser("export-dot", help="print a saved diagram as Graphviz DOT")
    d.add_argument("--diagram", required=True)
    d.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "limit", 0) < 0:
        print("vssdd: error: --limit must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"vssdd: error: {exc}", file=sys.stderr)
        return exc.code
    except InvariantError as exc:
        print(f"vssdd: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (MemoryError, RecursionError) as exc:
        print(f"vssdd: resource limit: {type(exc).__name__}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
