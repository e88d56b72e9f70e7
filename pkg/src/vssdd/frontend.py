"""DIMACS input, bottom-up compilation, and benchmark generators."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable

from .manager import TRIMMED, VsError, VsManager
from .sdd import SddManager
from .vtree import Vtree, build_balanced

__all__ = [
    "Cnf",
    "DimacsError",
    "CompileResult",
    "GeneratedInstance",
    "parse_dimacs",
    "to_dimacs",
    "compile_cnf",
    "compile_clauses",
    "gen_nqueens",
    "gen_grid_matching",
    "gen_matching_tree",
    "build_matching_tree",
    "matching_tree_vtree",
    "running_example_cnf",
]

log = logging.getLogger(__name__)


class DimacsError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


@dataclass
class Cnf:
    num_vars: int
    clauses: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise DimacsError(f"literal {lit} out of range 1..{self.num_vars}")


def parse_dimacs(text: str) -> Cnf:
    header = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    cur_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break  # SATLIB trailer
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"bad header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError("negative counts in header", lineno)
            continue
        if header is None:
            raise DimacsError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad token {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(cur)
                cur = []
                continue
            if abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} exceeds declared {header[0]} variables", lineno)
            cur.append(lit)
            cur_line = lineno
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if cur:
        raise DimacsError("unterminated final clause", cur_line)
    if len(clauses) != header[1]:
        log.warning("header declares %d clauses, found %d", header[1], len(clauses))
    return Cnf(header[0], clauses)


def to_dimacs(cnf: Cnf, comments: list[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, c + [0])) for c in cnf.clauses)
    return "\n".join(lines) + "\n"


def running_example_cnf() -> Cnf:
    """(A and B) or (B and C) or (C and D), with A..D = 1..4, as a CNF."""
    return Cnf(4, [[1, 3], [2, 3], [2, 4]])


# ----------------------------------------------------------------------
@dataclass
class CompileResult:
    handle: object
    manager: object
    stats: dict


def _clause_chain(mgr, clause):
    res = mgr.false()
    for lit in clause:
        res = mgr.disjoin(res, mgr.literal(abs(lit), lit > 0))
    return res


def compile_clauses(mgr, clauses) -> object:
    """Conjoin clause disjunction chains in the given order."""
    res = mgr.true()
    for clause in clauses:
        if not clause:
            return mgr.false()
        res = mgr.conjoin(res, _clause_chain(mgr, clause))
    return res


def compile_cnf(cnf: Cnf, vtree: Vtree, kind: str = "vs", mode: str = TRIMMED,
                compress: bool = True, manager=None) -> CompileResult:
    """Compile ``cnf`` bottom-up; ``kind`` is ``"vs"`` or ``"sdd"``."""
    used = {abs(l) for c in cnf.clauses for l in c}
    if used and max(used) > vtree.M:
        raise VsError(f"variable {max(used)} is not in the vtree (M={vtree.M})")
    if manager is None:
        if kind == "vs":
            manager = VsManager(vtree, mode=mode, compress=compress)
        elif kind == "sdd":
            manager = SddManager(vtree)
        else:
            raise ValueError(f"unknown manager kind {kind!r}")
    t0 = time.perf_counter()
    handle = compile_clauses(manager, cnf.clauses)
    elapsed = time.perf_counter() - t0
    stats = {"size": manager.size(handle), "node_count": manager.node_count(handle), "time": elapsed}
    if isinstance(manager, VsManager):
        stats.update(
            sdd_size=manager.sdd_size(handle),
            apply_calls=manager.stats["apply_calls"],
            cache_hits=manager.stats["cache_hits"],
            cache_misses=manager.stats["cache_misses"],
        )
    else:
        stats["apply_calls"] = manager.apply_calls
    return CompileResult(handle, manager, stats)


# ----------------------------------------------------------------------
# generators
@dataclass
class GeneratedInstance:
    kind: str
    name: str
    params: dict
    cnf: Cnf
    vtree: Vtree
    edges: list[tuple[int, int]] | None = None
    builder: Callable | None = None  # direct construction from a manager

    def build(self, mgr):
        if self.builder is not None:
            return self.builder(mgr)
        return compile_clauses(mgr, self.cnf.clauses)


def _pairwise_amo(vars_, out):
    for i in range(len(vars_)):
        for j in range(i + 1, len(vars_)):
            out.append([-vars_[i], -vars_[j]])


def gen_nqueens(n: int) -> GeneratedInstance:
    if n < 1:
        raise ValueError("N must be >= 1")

    def var(r, c):
        return r * n + c + 1

    clauses = [[var(r, c) for c in range(n)] for r in range(n)]
    for r in range(n):
        _pairwise_amo([var(r, c) for c in range(n)], clauses)
    for c in range(n):
        _pairwise_amo([var(r, c) for r in range(n)], clauses)
    for s in range(2 * n - 1):
        _pairwise_amo([var(r, s - r) for r in range(n) if 0 <= s - r < n], clauses)
    for dlt in range(-(n - 1), n):
        _pairwise_amo([var(r, r - dlt) for r in range(n) if 0 <= r - dlt < n], clauses)
    m = n * n
    return GeneratedInstance("queens", f"queens{n}", {"n": n}, Cnf(m, clauses), build_balanced(m))


def _matching_cnf(num_vertices: int, edges: list[tuple[int, int]]) -> Cnf:
    incident: list[list[int]] = [[] for _ in range(num_vertices)]
    for i, (a, b) in enumerate(edges, 1):
        incident[a].append(i)
        incident[b].append(i)
    clauses: list[list[int]] = []
    for inc in incident:
        _pairwise_amo(inc, clauses)
    return Cnf(len(edges), clauses)


def gen_grid_matching(p: int, q: int) -> GeneratedInstance:
    if p < 1 or q < 1:
        raise ValueError("grid dimensions must be >= 1")
    if p * q < 2:
        raise ValueError("grid has no edges")

    def vid(r, c):
        return r * q + c

    edges = [(vid(r, c), vid(r, c + 1)) for r in range(p) for c in range(q - 1)]
    edges += [(vid(r, c), vid(r + 1, c)) for r in range(p - 1) for c in range(q)]
    cnf = _matching_cnf(p * q, edges)
    return GeneratedInstance("grid", f"grid{p}x{q}", {"p": p, "q": q}, cnf,
                             build_balanced(len(edges)), edges=edges)


def _nand(mgr, a, b):
    return mgr.disjoin(mgr.literal(a, False), mgr.literal(b, False))


def build_matching_tree(mgr, j: int):
    """Build f_j level by level so shifted sub-blocks reuse cached results."""

    def rec(a: int, b: int, level: int):
        if level == 1:
            return _nand(mgr, a, b)
        sides = []
        for x in (a, b):
            c1, c2 = 2 * x + 1, 2 * x + 2
            side = mgr.conjoin(rec(c1, c2, level - 1), _nand(mgr, x, c1))
            sides.append(mgr.conjoin(side, _nand(mgr, x, c2)))
        return mgr.conjoin(mgr.conjoin(sides[0], sides[1]), _nand(mgr, a, b))

    return rec(1, 2, j)


def matching_tree_vtree(j: int) -> Vtree:
    def rec(a: int, b: int, level: int):
        if level == 1:
            return (a, b)
        return ((a, rec(2 * a + 1, 2 * a + 2, level - 1)), (b, rec(2 * b + 1, 2 * b + 2, level - 1)))

    return Vtree(rec(1, 2, j))


def gen_matching_tree(j: int) -> GeneratedInstance:
    if j < 1:
        raise ValueError("j must be >= 1")
    m = (1 << (j + 1)) - 2
    clauses = [[-1, -2]]
    for i in range(1, (1 << j) - 1):
        clauses += [[-i, -(2 * i + 1)], [-i, -(2 * i + 2)], [-(2 * i + 1), -(2 * i + 2)]]
    # edge i joins heap vertex (i - 1) // 2 to vertex i
    edges = [((i - 1) // 2, i) for i in range(1, m + 1)]
    return GeneratedInstance("ftree", f"ftree{j}", {"j": j}, Cnf(m, clauses),
                             matching_tree_vtree(j), edges=edges,
                             builder=lambda mgr: build_matching_tree(mgr, j))
