"""Brute-force ground truth for small instances.

Truth tables are numpy boolean vectors of length ``2**m``; row ``i`` assigns
variable ``v`` the bit ``(i >> (v - 1)) & 1``. Compiled diagrams are
evaluated by walking their raw structure tables, never through the apply,
count or condition code.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "MAX_VARS",
    "OracleLimitError",
    "TruthTable",
    "eval_cnf",
    "table_of_cnf",
    "table_of_vs",
    "table_of_sdd",
    "table_of",
    "essential_variables",
    "essential_vtree_node",
    "brute_solution_count",
    "count_queens",
    "count_matchings",
]

MAX_VARS = 24


class OracleLimitError(RuntimeError):
    """Instance too large for exhaustive evaluation."""


def _check(m: int) -> None:
    if m > MAX_VARS:
        raise OracleLimitError(f"{m} variables exceeds the oracle limit of {MAX_VARS}")


@lru_cache(maxsize=64)
def _column(m: int, v: int) -> np.ndarray:
    idx = np.arange(1 << m, dtype=np.uint32)
    col = ((idx >> np.uint32(v - 1)) & np.uint32(1)).astype(bool)
    col.flags.writeable = False
    return col


@dataclass(frozen=True)
class TruthTable:
    num_vars: int
    bits: np.ndarray

    def __post_init__(self):
        _check(self.num_vars)
        if self.bits.shape != (1 << self.num_vars,):
            raise ValueError("truth table length must be 2**num_vars")

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.num_vars == other.num_vars and bool(np.array_equal(self.bits, other.bits))

    __hash__ = None

    def column(self, v: int) -> np.ndarray:
        return _column(self.num_vars, v)

    def restrict(self, v: int, value: bool) -> "TruthTable":
        """``f|v=value`` as a table over the same variables (independent of ``v``)."""
        idx = np.arange(1 << self.num_vars, dtype=np.uint32)
        bit = np.uint32(1 << (v - 1))
        src = (idx | bit) if value else (idx & ~bit)
        return TruthTable(self.num_vars, self.bits[src])

    def condition(self, term: Iterable[int]) -> "TruthTable":
        t = self
        for lit in term:
            t = t.restrict(abs(lit), lit > 0)
        return t

    def forget(self, v: int) -> "TruthTable":
        return TruthTable(self.num_vars, self.restrict(v, False).bits | self.restrict(v, True).bits)

    def depends_on(self, v: int) -> bool:
        return not np.array_equal(self.restrict(v, False).bits, self.restrict(v, True).bits)

    def models(self) -> list[dict[int, bool]]:
        rows = np.flatnonzero(self.bits)
        return [{v: bool((int(i) >> (v - 1)) & 1) for v in range(1, self.num_vars + 1)} for i in rows]

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.num_vars, ~self.bits)

    def __and__(self, other: "TruthTable") -> "TruthTable":
        return TruthTable(self.num_vars, self.bits & other.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        return TruthTable(self.num_vars, self.bits | other.bits)

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        return TruthTable(self.num_vars, self.bits ^ other.bits)


def eval_cnf(cnf, assignment: Mapping[int, bool] | Sequence[bool]) -> bool:
    """Evaluate a CNF under a full assignment (mapping or 0-based sequence)."""
    if not isinstance(assignment, Mapping):
        assignment = {i + 1: bool(x) for i, x in enumerate(assignment)}
    for clause in cnf.clauses:
        if not any(assignment[abs(lit)] == (lit > 0) for lit in clause):
            return False
    return True


def table_of_cnf(cnf, num_vars: int | None = None) -> TruthTable:
    m = cnf.num_vars if num_vars is None else num_vars
    _check(m)
    bits = np.ones(1 << m, dtype=bool)
    for clause in cnf.clauses:
        sat = np.zeros(1 << m, dtype=bool)
        for lit in clause:
            col = _column(m, abs(lit))
            sat |= col if lit > 0 else ~col
        bits &= sat
    return TruthTable(m, bits)


def table_of_vs(manager, f) -> TruthTable:
    """Evaluate a VS-SDD by recursive descent over (structure, offset) pairs."""
    vt = manager.vtree
    m = vt.M
    _check(m)
    elems = manager._kind_elems
    memo: dict[tuple[int, int], np.ndarray] = {}
    ones = np.ones(1 << m, dtype=bool)
    zeros = np.zeros(1 << m, dtype=bool)

    def ev(s: int, k: int) -> np.ndarray:
        if s == 0:
            return zeros
        if s == 1:
            return ones
        key = (s, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if s < 4:
            var = vt.var[k]
            if not var:
                raise ValueError(f"literal shape at internal vtree node {k}")
            col = _column(m, var)
            res = col if s == 2 else ~col
        else:
            res = zeros.copy()
            for p, d, q, e in elems[s]:
                res |= ev(p, k + d) & ev(q, k + e)
        memo[key] = res
        return res

    return TruthTable(m, ev(f[0], f[1]).copy())


def table_of_sdd(manager, node: int) -> TruthTable:
    vt = manager.vtree
    m = vt.M
    _check(m)
    memo: dict[int, np.ndarray] = {}

    def ev(n: int) -> np.ndarray:
        if n <= 1:
            return np.full(1 << m, bool(n))
        hit = memo.get(n)
        if hit is not None:
            return hit
        if manager.is_literal(n):
            var, pos = manager.literal_of(n)
            col = _column(m, var)
            res = col if pos else ~col
        else:
            res = np.zeros(1 << m, dtype=bool)
            for p, s in manager.elements(n):
                res |= ev(p) & ev(s)
        memo[n] = res
        return res

    return TruthTable(m, ev(node).copy())


def table_of(obj, manager=None, num_vars: int | None = None) -> TruthTable:
    """Truth table of a CNF, a VS-SDD handle or an SDD node id."""
    if hasattr(obj, "clauses"):
        return table_of_cnf(obj, num_vars)
    if manager is None:
        raise TypeError("compiled handles need their manager")
    if isinstance(obj, tuple):
        return table_of_vs(manager, obj)
    return table_of_sdd(manager, obj)


def essential_variables(table: TruthTable) -> list[int]:
    return [v for v in range(1, table.num_vars + 1) if table.depends_on(v)]


def essential_vtree_node(table: TruthTable, vtree) -> int | None:
    """Deepest vtree node covering every essential variable; None if trivial."""
    ess = essential_variables(table)
    if not ess:
        return None
    node = vtree.leaf_of[ess[0]]
    for v in ess[1:]:
        node = _naive_lca(vtree, node, vtree.leaf_of[v])
    return node


def _naive_lca(vtree, u: int, w: int) -> int:
    ancestors = set()
    while u:
        ancestors.add(u)
        u = vtree.parent[u]
    while w not in ancestors:
        w = vtree.parent[w]
    return w


# ----------------------------------------------------------------------
# combinatorial counts, no diagram code involved
def count_queens(n: int) -> int:
    """Backtracking count of non-attacking placements of n queens."""
    if n > 10:
        raise OracleLimitError("queens oracle limited to N <= 10")

    def place(row: int, cols: int, d1: int, d2: int) -> int:
        if row == n:
            return 1
        total = 0
        for c in range(n):
            if cols >> c & 1 or d1 >> (row + c) & 1 or d2 >> (row - c + n) & 1:
                continue
            total += place(row + 1, cols | 1 << c, d1 | 1 << (row + c), d2 | 1 << (row - c + n))
        return total

    return place(0, 0, 0, 0)


def count_matchings(edges: Sequence[tuple[int, int]]) -> int:
    """Number of edge subsets with no shared endpoint (empty set included)."""
    if len(edges) > 30:
        raise OracleLimitError("matching oracle limited to 30 edges")

    def scan(i: int, used: frozenset) -> int:
        if i == len(edges):
            return 1
        a, b = edges[i]
        total = scan(i + 1, used)
        if a not in used and b not in used:
            total += scan(i + 1, used | {a, b})
        return total

    return scan(0, frozenset())


def brute_solution_count(instance) -> int:
    """Independent solution count for a generated instance."""
    kind = instance.kind
    if kind == "queens":
        return count_queens(instance.params["n"])
    if kind in ("grid", "ftree"):
        return count_matchings(instance.edges)
    raise ValueError(f"no combinatorial oracle for instance kind {kind!r}")
