"""Materialize a VS-SDD as an ordinary SDD on the same vtree."""
from __future__ import annotations

from .manager import FALSE, LIT, TRUE, TRIMMED, VsManager, VsSdd
from .sdd import SddManager

__all__ = ["to_baseline_sdd"]


def to_baseline_sdd(mgr: VsManager, f: VsSdd, sdd: SddManager | None = None) -> tuple[SddManager, int]:
    """One SDD node per distinct (structure, absolute offset) placement.

    A compressed trimmed VS-SDD already has the shape of the canonical SDD,
    so its placements are interned directly. Other forms are rebuilt with
    the baseline apply so the result is still the canonical SDD.
    """
    mgr.check(f)
    if sdd is None:
        sdd = SddManager(mgr.vtree)
    vt = mgr.vtree
    direct = mgr.mode == TRIMMED and mgr.compress
    memo: dict[tuple[int, int], int] = {}

    def go(s: int, k: int) -> int:
        if s <= TRUE:
            return s
        key = (s, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if s < 4:
            res = sdd.literal(vt.var[k], s == LIT)
        elif direct:
            res = sdd.decomposition(k, [(go(p, k + d), go(q, k + e)) for p, d, q, e in mgr.elements(s)])
        else:
            res = FALSE
            for p, d, q, e in mgr.elements(s):
                res = sdd.disjoin(res, sdd.conjoin(go(p, k + d), go(q, k + e)))
        memo[key] = res
        return res

    return sdd, go(f.structure, f.offset)
