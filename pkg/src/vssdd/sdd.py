"""Baseline SDD manager: compressed and trimmed, nodes tagged by vtree node.

Node ids are small ints. ``0`` is false, ``1`` is true, literals and
decompositions are interned in a unique table so that, for a fixed vtree,
equal functions get equal ids.
"""
from __future__ import annotations

from .vtree import Vtree

__all__ = ["SddManager", "SddError", "FALSE", "TRUE"]

FALSE = 0
TRUE = 1

_CONST, _LIT, _DEC = 0, 1, 2

AND = "and"
OR = "or"
XOR = "xor"
OPS = {
    AND: lambda a, b: a and b,
    OR: lambda a, b: a or b,
    XOR: lambda a, b: a != b,
}


class SddError(ValueError):
    pass


class SddManager:
    """Unique table + apply cache over a fixed vtree."""

    def __init__(self, vtree: Vtree):
        self.vtree = vtree
        # payload: None for constants, (var, positive) for literals,
        # tuple of (prime, sub) pairs for decompositions
        self._payload: list = [None, None]
        self._kind: list[int] = [_CONST, _CONST]
        self._vnode: list[int] = [0, 0]
        self._unique: dict = {}
        self._apply_cache: dict = {}
        self._neg_cache: dict[int, int] = {FALSE: TRUE, TRUE: FALSE}
        self.apply_calls = 0

    # ------------------------------------------------------------------
    def _intern(self, vnode: int, payload, kind: int) -> int:
        key = (vnode, payload)
        nid = self._unique.get(key)
        if nid is None:
            nid = len(self._payload)
            self._payload.append(payload)
            self._kind.append(kind)
            self._vnode.append(vnode)
            self._unique[key] = nid
        return nid

    def constant(self, value: bool) -> int:
        return TRUE if value else FALSE

    def true(self) -> int:
        return TRUE

    def false(self) -> int:
        return FALSE

    def literal(self, var: int, positive: bool = True) -> int:
        if not isinstance(var, int) or not 1 <= var <= self.vtree.M:
            raise SddError(f"unknown variable {var!r}")
        return self._intern(self.vtree.leaf_of[var], (var, bool(positive)), _LIT)

    def is_constant(self, n: int) -> bool:
        return n <= TRUE

    def is_literal(self, n: int) -> bool:
        return self._kind[n] == _LIT

    def is_decomposition(self, n: int) -> bool:
        return self._kind[n] == _DEC

    def vnode(self, n: int) -> int:
        """Vtree node respected by ``n`` (0 for constants)."""
        return self._vnode[n]

    def elements(self, n: int) -> tuple:
        if not self.is_decomposition(n):
            raise SddError(f"node {n} is not a decomposition")
        return self._payload[n]

    def literal_of(self, n: int) -> tuple[int, bool]:
        return self._payload[n]

    def decomposition(self, vnode: int, elements) -> int:
        """Intern a decomposition as given; the caller vouches for canonicity."""
        elems = tuple(sorted(elements))
        return self._intern(vnode, elems, _DEC)

    # ------------------------------------------------------------------
    def negate(self, n: int) -> int:
        res = self._neg_cache.get(n)
        if res is not None:
            return res
        if self.is_literal(n):
            var, pos = self._payload[n]
            res = self.literal(var, not pos)
        else:
            # same primes, negated subs: still compressed and trimmed
            elems = [(p, self.negate(s)) for p, s in self._payload[n]]
            res = self.decomposition(self._vnode[n], elems)
        self._neg_cache[n] = res
        self._neg_cache[res] = n
        return res

    def _expand(self, n: int, w: int) -> list[tuple[int, int]]:
        vn = self._vnode[n]
        if vn == w:
            return list(self._payload[n])
        if vn != 0 and vn < self.vtree.right[w]:
            return [(n, TRUE), (self.negate(n), FALSE)]
        return [(TRUE, n)]

    def apply(self, a: int, b: int, op: str) -> int:
        if op not in OPS:
            raise SddError(f"unknown operator {op!r}")
        if not (0 <= a < len(self._payload) and 0 <= b < len(self._payload)):
            raise SddError("node does not belong to this manager")
        return self._apply(a, b, op)

    def _apply(self, a: int, b: int, op: str) -> int:
        self.apply_calls += 1
        # constant and identity shortcuts
        if a <= TRUE or b <= TRUE:
            if a <= TRUE and b <= TRUE:
                return TRUE if OPS[op](a == TRUE, b == TRUE) else FALSE
            c, x = (a, b) if a <= TRUE else (b, a)
            if op == AND:
                return x if c == TRUE else FALSE
            if op == OR:
                return TRUE if c == TRUE else x
            return self.negate(x) if c == TRUE else x
        if a == b:
            return FALSE if op == XOR else a
        if a > b:
            a, b = b, a
        key = (a, b, op)
        res = self._apply_cache.get(key)
        if res is not None:
            return res
        va, vb = self._vnode[a], self._vnode[b]
        if va == vb and self.vtree.var[va]:
            # X and not-X, since a != b
            return FALSE if op == AND else TRUE
        w = self.vtree.lca(va, vb)
        elems: dict[int, int] = {}
        for p, s in self._expand(a, w):
            for q, r in self._expand(b, w):
                prime = self._apply(p, q, AND)
                if prime == FALSE:
                    continue
                sub = self._apply(s, r, op)
                # compression: disjoin primes that share a sub
                prev = elems.get(sub)
                elems[sub] = prime if prev is None else self._apply(prev, prime, OR)
        res = self._make(w, elems)
        self._apply_cache[key] = res
        return res

    def _make(self, w: int, by_sub: dict[int, int]) -> int:
        if len(by_sub) == 1:
            (sub,) = by_sub
            return sub
        if len(by_sub) == 2 and TRUE in by_sub and FALSE in by_sub:
            return by_sub[TRUE]
        return self.decomposition(w, [(p, s) for s, p in by_sub.items()])

    def conjoin(self, a: int, b: int) -> int:
        return self.apply(a, b, AND)

    def disjoin(self, a: int, b: int) -> int:
        return self.apply(a, b, OR)

    # ------------------------------------------------------------------
    def condition(self, n: int, term) -> int:
        """Restrict ``n`` by a consistent set of signed literals."""
        assign: dict[int, bool] = {}
        for lit in term:
            v = abs(lit)
            if v in assign and assign[v] != (lit > 0):
                raise SddError(f"inconsistent term {sorted(term)!r}")
            assign[v] = lit > 0
        cache: dict[int, int] = {}

        def go(x: int) -> int:
            if x <= TRUE:
                return x
            hit = cache.get(x)
            if hit is not None:
                return hit
            if self.is_literal(x):
                var, pos = self._payload[x]
                res = x if var not in assign else (TRUE if assign[var] == pos else FALSE)
            else:
                res = FALSE
                for p, s in self._payload[x]:
                    res = self._apply(res, self._apply(go(p), go(s), AND), OR)
            cache[x] = res
            return res

        return go(n)

    def size(self, n: int) -> int:
        """Sum of element counts over distinct reachable decompositions."""
        return sum(len(self._payload[x]) for x in self._reachable(n) if self.is_decomposition(x))

    def node_count(self, n: int) -> int:
        return sum(1 for x in self._reachable(n) if self.is_decomposition(x))

    def _reachable(self, n: int) -> set[int]:
        seen = {n}
        stack = [n]
        while stack:
            x = stack.pop()
            if self.is_decomposition(x):
                for p, s in self._payload[x]:
                    for c in (p, s):
                        if c not in seen:
                            seen.add(c)
                            stack.append(c)
        return seen

    def model_count(self, n: int) -> int:
        """Models over all ``M`` vtree variables."""
        vt = self.vtree
        cache: dict[int, int] = {}

        def under(x: int, v: int) -> int:
            # count over the variables of vtree node v, which contains x
            if x == FALSE:
                return 0
            if x == TRUE:
                return 1 << vt.L[v]
            return count(x) << (vt.L[v] - vt.L[self._vnode[x]])

        def count(x: int) -> int:
            hit = cache.get(x)
            if hit is not None:
                return hit
            if self.is_literal(x):
                res = 1
            else:
                w = self._vnode[x]
                res = sum(under(p, vt.left[w]) * under(s, vt.right[w]) for p, s in self._payload[x])
            cache[x] = res
            return res

        return under(n, 1)

    def __len__(self) -> int:
        return len(self._payload)
