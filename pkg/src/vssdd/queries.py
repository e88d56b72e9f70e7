"""Queries and transformations on VS-SDDs.

Model counts are cached per structure id: shifted copies of a structure
denote substitution-equivalent functions, which have the same count.
"""
from __future__ import annotations

from contextlib import contextmanager
from itertools import product
from typing import Iterable, Iterator

from .manager import FALSE, LIT, NLIT, TRUE, VsError, VsManager, VsSdd

__all__ = [
    "CountContext",
    "InvalidUniverseError",
    "count",
    "enumerate_models",
    "format_model",
    "entails",
    "equivalent",
    "satisfiable",
    "valid",
    "clausal_entails",
    "is_implicant",
    "forget_singleton",
    "condition",
    "support",
]


class InvalidUniverseError(VsError):
    """The universe misses a variable the function essentially depends on."""


class CountContext:
    """Model counter bound to one manager, with a structure-keyed cache."""

    def __init__(self, manager: VsManager, universe: Iterable[int] | None = None):
        self.manager = manager
        vt = manager.vtree
        if universe is None:
            self.universe = frozenset(range(1, vt.M + 1))
        else:
            self.universe = frozenset(universe)
            bad = [v for v in self.universe if not 1 <= v <= vt.M]
            if bad:
                raise InvalidUniverseError(f"unknown variables in universe: {sorted(bad)}")
        self._cache: dict[int, int] = {}
        self.visits = 0  # decomposition nodes actually expanded

    def _count(self, s: int) -> int:
        """Models of structure ``s`` over the variables of its class node."""
        if s == FALSE:
            return 0
        if s < 4:
            return 1
        hit = self._cache.get(s)
        if hit is not None:
            return hit
        self.visits += 1
        mgr = self.manager
        vt = mgr.vtree
        L = vt.L
        w = mgr.structure_class(s)
        lw, rw = vt.left[w], vt.right[w]
        total = 0
        for p, d, q, e in mgr.elements(s):
            if p == TRUE:
                np_ = 1 << L[lw]
            elif p == FALSE:
                continue
            else:
                np_ = self._count(p) << (L[lw] - L[w + d])
            if q == TRUE:
                ns = 1 << L[rw]
            elif q == FALSE:
                continue
            else:
                ns = self._count(q) << (L[rw] - L[w + e])
            total += np_ * ns
        self._cache[s] = total
        return total

    def count_all(self, f: VsSdd) -> int:
        """Models over all vtree variables."""
        self.manager.check(f)
        vt = self.manager.vtree
        s, k = f
        if s == FALSE:
            return 0
        if s == TRUE:
            return 1 << vt.M
        return self._count(s) << (vt.M - vt.L[k])

    def count(self, f: VsSdd) -> int:
        total = self.count_all(f)
        gap = self.manager.vtree.M - len(self.universe)
        if gap:
            outside = support(self.manager, f) - self.universe
            for v in outside:
                if _essential(self.manager, f, v):
                    raise InvalidUniverseError(f"function depends on variable {v} outside the universe")
        return total >> gap


def _essential(mgr: VsManager, f: VsSdd, v: int) -> bool:
    return not equivalent(mgr, mgr.condition(f, [v]), mgr.condition(f, [-v]))


def support(mgr: VsManager, f: VsSdd) -> set[int]:
    """Variables whose literals occur in the diagram."""
    vt = mgr.vtree
    return {vt.var[k] for s, k in mgr.placements(f) if s in (LIT, NLIT)}


def count(mgr: VsManager, f: VsSdd, universe: Iterable[int] | None = None) -> int:
    return CountContext(mgr, universe).count(f)


# ----------------------------------------------------------------------
# enumeration
def enumerate_models(mgr: VsManager, f: VsSdd, limit: int = 0,
                     universe: Iterable[int] | None = None) -> Iterator[dict[int, bool]]:
    """Full models over the universe, in a fixed depth-first order.

    Elements are visited in stored order; variables not constrained by the
    current branch are expanded false before true, in leaf preorder.
    """
    if limit < 0:
        raise VsError("limit must be >= 0")
    mgr.check(f)
    vt = mgr.vtree
    uni = frozenset(range(1, vt.M + 1)) if universe is None else frozenset(universe)
    if universe is not None:
        # validate the universe the same way count does
        CountContext(mgr, uni).count(f)
        dropped = [-v for v in range(1, vt.M + 1) if v not in uni]
        if dropped:
            f = mgr.condition(f, dropped)
    # free variables of each vtree node, restricted to the universe
    free_of = [[v for v in vt.variables(n) if v in uni] if n else [] for n in range(vt.size + 1)]

    def free(outer: int, inner: int) -> list[int]:
        if inner == 0:
            return free_of[outer]
        lo, hi = inner, vt.end(inner)
        return [v for v in free_of[outer] if not lo <= vt.leaf_of[v] <= hi]

    def fill(vars_: list[int]) -> Iterator[dict[int, bool]]:
        for bits in product((False, True), repeat=len(vars_)):
            yield dict(zip(vars_, bits))

    def models(s: int, k: int) -> Iterator[dict[int, bool]]:
        # models of (s, k) over the universe variables below k
        if s == FALSE:
            return
        if s < 4:
            var = vt.var[k]
            yield {var: s == LIT} if var in uni else {}
            return
        lw, rw = vt.left[k], vt.right[k]
        for p, d, q, e in mgr.elements(s):
            if p == FALSE or q == FALSE:
                continue
            kp = k + d if p > TRUE else 0
            kq = k + e if q > TRUE else 0
            for mp in within(p, kp, lw):
                for mq in within(q, kq, rw):
                    yield {**mp, **mq}

    def within(s: int, k: int, outer: int) -> Iterator[dict[int, bool]]:
        gap = free(outer, k)
        inner = models(s, k) if s != TRUE else iter(({},))
        for m in inner:
            for g in fill(gap):
                yield {**m, **g}

    s, k = f
    n = 0
    for m in within(s, k if s > TRUE else 0, 1):
        yield {v: m[v] for v in sorted(m)}
        n += 1
        if limit and n >= limit:
            return


def format_model(model: dict[int, bool]) -> str:
    return " ".join(f"X{v}={int(b)}" for v, b in sorted(model.items()))


# ----------------------------------------------------------------------
# entailment family
@contextmanager
def _uncompressed(mgr: VsManager):
    saved = mgr.compress
    mgr.compress = False
    try:
        yield
    finally:
        mgr.compress = saved


def entails(mgr: VsManager, f: VsSdd, g: VsSdd) -> bool:
    """f |= g, decided by comparing count(f and g) with count(f)."""
    mgr.check(f)
    mgr.check(g)
    with _uncompressed(mgr):
        both = mgr.conjoin(f, g)
    ctx = CountContext(mgr)
    return ctx.count_all(both) == ctx.count_all(f)


def canonical(mgr: VsManager) -> bool:
    """Whether equal functions are guaranteed equal handles."""
    return mgr.compress


def equivalent(mgr: VsManager, f: VsSdd, g: VsSdd) -> bool:
    mgr.check(f)
    mgr.check(g)
    if canonical(mgr):
        return tuple(f) == tuple(g)
    return entails(mgr, f, g) and entails(mgr, g, f)


def satisfiable(mgr: VsManager, f: VsSdd) -> bool:
    mgr.check(f)
    return mgr.consistent(f.structure)


def valid(mgr: VsManager, f: VsSdd) -> bool:
    return not satisfiable(mgr, mgr.negate(f))


def _term(mgr: VsManager, lits: Iterable[int]) -> list[int]:
    lits = list(lits)
    seen: dict[int, bool] = {}
    for lit in lits:
        if not isinstance(lit, int) or lit == 0 or abs(lit) > mgr.vtree.M:
            raise VsError(f"unknown variable in literal {lit!r}")
        if seen.get(abs(lit), lit > 0) != (lit > 0):
            raise VsError(f"inconsistent term {sorted(lits)!r}")
        seen[abs(lit)] = lit > 0
    return lits


def clausal_entails(mgr: VsManager, f: VsSdd, clause: Iterable[int]) -> bool:
    clause = list(clause)
    for lit in clause:
        if not isinstance(lit, int) or lit == 0 or abs(lit) > mgr.vtree.M:
            raise VsError(f"unknown variable in literal {lit!r}")
    if any(-lit in clause for lit in clause):
        return True  # tautological clause
    return not satisfiable(mgr, mgr.condition(f, [-lit for lit in clause]))


def is_implicant(mgr: VsManager, f: VsSdd, term: Iterable[int]) -> bool:
    return valid(mgr, mgr.condition(f, _term(mgr, term)))


def condition(mgr: VsManager, f: VsSdd, term: Iterable[int]) -> VsSdd:
    return mgr.condition(f, _term(mgr, term))


def forget_singleton(mgr: VsManager, f: VsSdd, var: int, uncompressed: bool = False) -> VsSdd:
    """f|X or f|not-X.

    With ``uncompressed`` the disjunction runs with compression off, which
    keeps the size bound but gives up canonical handles.
    """
    if isinstance(var, bool) or not isinstance(var, int) or not 1 <= var <= mgr.vtree.M:
        raise VsError(f"unknown variable {var!r}")
    pos, neg = mgr.condition(f, [var]), mgr.condition(f, [-var])
    if uncompressed:
        with _uncompressed(mgr):
            return mgr.disjoin(pos, neg)
    return mgr.disjoin(pos, neg)

